#include "mgsg/fd.hpp"

#include <cmath>

#include "mgsg/error.hpp"

namespace mgsg {

FdOperator::FdOperator(const MetricGraph& g, const BoundaryConditions& bc, double h, double external_extent) : g_(&g)
{
    if (!(h > 0.0) || !(external_extent > 0.0))
        throw Error(ErrorCode::InvalidParams, "grid step and cut-off must be positive");
    const std::size_t nedges = g.num_edges();
    offset_.resize(nedges);
    intervals_.resize(nedges);
    step_.resize(nedges);
    Eigen::Index pos = 0;
    for (std::size_t j = 0; j < nedges; ++j) {
        const double len = g.is_external(j) ? external_extent : g.length(j);
        intervals_[j] = static_cast<std::size_t>(std::max(4.0, std::ceil(len / h - 1e-9)));
        step_[j] = len / double(intervals_[j]);
        offset_[j] = pos;
        pos += static_cast<Eigen::Index>(intervals_[j] + 1);
    }
    const Eigen::Index ghost0 = pos;
    const auto m = static_cast<Eigen::Index>(g.dim());
    size_ = pos + m;

    std::vector<Eigen::Triplet<cplx>> trip;
    mass_ = Eigen::VectorXd::Zero(size_);
    for (std::size_t j = 0; j < nedges; ++j) {
        const std::size_t N = intervals_[j];
        const double inv_h2 = 1.0 / (step_[j] * step_[j]);
        const Eigen::Index gin = ghost0 + static_cast<Eigen::Index>(g.k_index(j, End::Initial));
        const Eigen::Index gout = g.is_external(j) ? -1 : ghost0 + static_cast<Eigen::Index>(g.k_index(j, End::Terminal));
        for (std::size_t n = 0; n <= N; ++n) {
            const Eigen::Index row = node(j, n);
            if (g.is_external(j) && n == N) {
                trip.emplace_back(row, row, 1.0);
                continue;
            }
            mass_(row) = 1.0;
            const Eigen::Index left = n == 0 ? gin : row - 1;
            const Eigen::Index right = n == N ? gout : row + 1;
            trip.emplace_back(row, left, -inv_h2);
            trip.emplace_back(row, row, 2.0 * inv_h2);
            trip.emplace_back(row, right, -inv_h2);
        }
    }
    // Boundary rows: A psi + B psi' with centred derivatives through the ghosts.
    const CMatrix& A = bc.A();
    const CMatrix& B = bc.B();
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index row = ghost0 + r;
        for (Eigen::Index c = 0; c < m; ++c) {
            const cplx a = A(r, c), b = B(r, c);
            if (a == 0.0 && b == 0.0)
                continue;
            const std::size_t j = g.k_edge(static_cast<std::size_t>(c));
            const double hj = step_[j];
            const Eigen::Index gh = ghost0 + c;
            if (g.k_end(static_cast<std::size_t>(c)) == End::Initial) {
                trip.emplace_back(row, node(j, 0), a);
                trip.emplace_back(row, node(j, 1), b / (2.0 * hj));
                trip.emplace_back(row, gh, -b / (2.0 * hj));
            } else {
                const std::size_t N = intervals_[j];
                trip.emplace_back(row, node(j, N), a);
                // psi' trace at a terminal end is -psi'(a).
                trip.emplace_back(row, gh, -b / (2.0 * hj));
                trip.emplace_back(row, node(j, N - 1), b / (2.0 * hj));
            }
        }
    }
    K_.resize(size_, size_);
    K_.setFromTriplets(trip.begin(), trip.end());
    K_.makeCompressed();
}

std::size_t FdOperator::nearest(std::size_t j, double x) const
{
    const double s = std::round(x / step_[j]);
    return static_cast<std::size_t>(std::clamp(s, 0.0, double(intervals_[j])));
}

GraphFunction FdOperator::to_function(const CVector& u) const
{
    GraphFunction f;
    f.edges.resize(offset_.size());
    for (std::size_t j = 0; j < offset_.size(); ++j) {
        f.edges[j].step = step_[j];
        f.edges[j].values.resize(intervals_[j] + 1);
        for (std::size_t n = 0; n <= intervals_[j]; ++n)
            f.edges[j].values[n] = u(node(j, n));
    }
    return f;
}

CVector FdOperator::from_function(const GraphFunction& f) const
{
    if (f.edges.size() != offset_.size())
        throw Error(ErrorCode::DimensionMismatch, "function does not match the graph");
    CVector u = CVector::Zero(size_);
    for (std::size_t j = 0; j < offset_.size(); ++j)
        for (std::size_t n = 0; n <= intervals_[j]; ++n)
            u(node(j, n)) = f.edges[j].at(step_[j] * double(n));
    return u;
}

FdResolvent::FdResolvent(const FdOperator& op, cplx k) : op_(&op), lu_(std::make_unique<Eigen::SparseLU<SparseC>>())
{
    SparseC M = op.stiffness();
    for (Eigen::Index i = 0; i < op.size(); ++i)
        if (op.mass()(i) != 0.0)
            M.coeffRef(i, i) -= k * k;
    lu_->compute(M);
    if (lu_->info() != Eigen::Success)
        throw Error(ErrorCode::LinearSolveFailure, "finite-difference resolvent is singular");
}

cplx FdResolvent::green(std::size_t j, double x, std::size_t jp, double y) const
{
    const std::size_t q = op_->nearest(jp, y);
    CVector rhs = CVector::Zero(op_->size());
    rhs(op_->node(jp, q)) = 1.0 / op_->step(jp);
    CVector u = lu_->solve(rhs);
    return u(op_->node(j, op_->nearest(j, x)));
}

} // namespace mgsg
