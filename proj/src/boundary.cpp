#include "mgsg/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mgsg/error.hpp"

namespace mgsg {

namespace {

CMatrix concat(const CMatrix& A, const CMatrix& B)
{
    CMatrix AB(A.rows(), A.cols() + B.cols());
    AB << A, B;
    return AB;
}

void require_square_pair(const CMatrix& A, const CMatrix& B)
{
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw Error(ErrorCode::DimensionMismatch,
                    "A and B must be square of equal size (got " + std::to_string(A.rows()) + "x" +
                        std::to_string(A.cols()) + " and " + std::to_string(B.rows()) + "x" +
                        std::to_string(B.cols()) + ")");
}

bool is_real_vector(const CVector& v, double tol)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i).imag()) > tol)
            return false;
    return true;
}

// 0: not sign-definite, 1: sign-definite, 2: strictly sign-definite.
int sign_definiteness(const CVector& g, double tol)
{
    if (!is_real_vector(g, tol))
        return 0;
    bool nonneg = true, nonpos = true, nonzero = true;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        double x = g(i).real();
        if (x < -tol)
            nonneg = false;
        if (x > tol)
            nonpos = false;
        if (std::abs(x) <= tol)
            nonzero = false;
    }
    if (!nonneg && !nonpos)
        return 0;
    return nonzero ? 2 : 1;
}

double vector_tol(const CVector& g)
{
    return 1e-10 * std::max(1.0, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
}

} // namespace

BoundaryConditions::BoundaryConditions(CMatrix A, CMatrix B) : A_(std::move(A)), B_(std::move(B))
{
    require_square_pair(A_, B_);
    if (!check_rank(A_, B_))
        throw Error(ErrorCode::RankDeficient, "rank of (A,B) is below " + std::to_string(A_.rows()));
    kernel_ = kernel_basis(stacked());
    p_perp_ = projection_complement(A_, B_);
}

CMatrix BoundaryConditions::stacked() const
{
    return concat(A_, B_);
}

bool check_rank(const CMatrix& A, const CMatrix& B)
{
    require_square_pair(A, B);
    return numerical_rank(concat(A, B)) == A.rows();
}

VertexConditions make_vertex_conditions(const VertexSpec& spec, std::size_t degree, const std::string& vertex)
{
    if (degree == 0)
        throw Error(ErrorCode::InvalidParams, "vertex degree must be positive");
    const auto n = static_cast<Eigen::Index>(degree);
    const CVector h = CVector::Ones(n);
    switch (spec.kind) {
    case VertexKind::Dirichlet:
        return {vertex, CMatrix::Identity(n, n), CMatrix::Zero(n, n)};
    case VertexKind::Standard:
        return canonical_vertex_conditions(0.0, h, vertex);
    case VertexKind::Delta:
        return canonical_vertex_conditions(spec.gamma, h, vertex);
    case VertexKind::Generic: {
        if (spec.alpha != 0 && spec.alpha != -1)
            throw Error(ErrorCode::InvalidParams, "alpha must be 0 or -1");
        if (spec.g.size() != n)
            throw Error(ErrorCode::InvalidParams, "g has " + std::to_string(spec.g.size()) +
                                                      " entries, vertex degree is " + std::to_string(n));
        cplx hg = h.adjoint() * spec.g;
        if (spec.alpha == -1 && std::abs(hg) <= 1e-14 * std::max(1.0, spec.g.norm()))
            throw Error(ErrorCode::InvalidParams, "alpha = -1 requires <h, g> != 0");
        CMatrix A = CMatrix::Identity(n, n) + (double(spec.alpha) / double(n)) * h * h.adjoint();
        CMatrix B = h * spec.g.adjoint();
        return {vertex, A, B};
    }
    }
    throw Error(ErrorCode::InvalidParams, "unknown vertex condition kind");
}

VertexConditions canonical_vertex_conditions(cplx gamma, const CVector& p, const std::string& vertex)
{
    const Eigen::Index n = p.size();
    if (n == 0)
        throw Error(ErrorCode::InvalidParams, "vertex degree must be positive");
    CMatrix A = CMatrix::Zero(n, n), B = CMatrix::Zero(n, n);
    for (Eigen::Index r = 0; r + 1 < n; ++r) {
        A(r, r) = 1.0;
        A(r, r + 1) = -1.0;
    }
    A(n - 1, n - 1) = -gamma;
    B.row(n - 1) = p.transpose();
    return {vertex, A, B};
}

BoundaryConditions assemble_global(const MetricGraph& g, const std::vector<VertexConditions>& per_vertex)
{
    const auto m = static_cast<Eigen::Index>(g.dim());
    CMatrix A = CMatrix::Zero(m, m), B = CMatrix::Zero(m, m);
    std::vector<bool> seen(g.num_vertices(), false);
    for (const auto& vc : per_vertex) {
        auto v = g.find_vertex(vc.vertex);
        if (!v)
            throw Error(ErrorCode::MissingVertex, "conditions given for unknown vertex '" + vc.vertex + "'");
        const auto& L = g.layout().vertex_indices[*v];
        const auto d = static_cast<Eigen::Index>(L.size());
        if (vc.A.rows() != d || vc.A.cols() != d || vc.B.rows() != d || vc.B.cols() != d)
            throw Error(ErrorCode::DimensionMismatch, "vertex '" + vc.vertex + "' has degree " + std::to_string(d));
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) {
                A(L[r], L[c]) = vc.A(r, c);
                B(L[r], L[c]) = vc.B(r, c);
            }
        seen[*v] = true;
    }
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (!seen[v])
            throw Error(ErrorCode::MissingVertex, "no conditions for vertex '" + g.vertex_id(v) + "'");
    return BoundaryConditions(A, B);
}

BoundaryConditions assemble_global(const MetricGraph& g, const std::map<std::string, VertexSpec>& specs)
{
    std::vector<VertexConditions> blocks;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        auto it = specs.find(g.vertex_id(v));
        if (it == specs.end())
            throw Error(ErrorCode::MissingVertex, "no conditions for vertex '" + g.vertex_id(v) + "'");
        blocks.push_back(make_vertex_conditions(it->second, g.degree(v), g.vertex_id(v)));
    }
    return assemble_global(g, blocks);
}

BoundaryConditions assemble_nonlocal_mugnolo(const MetricGraph& g, const CMatrix& C, const std::string& special)
{
    auto vs = g.find_vertex(special);
    if (!vs)
        throw Error(ErrorCode::MissingVertex, "unknown vertex '" + special + "'");
    std::vector<std::size_t> others;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        if (v != *vs)
            others.push_back(v);
    const auto nv = static_cast<Eigen::Index>(others.size());
    if (C.rows() != nv || C.cols() != nv)
        throw Error(ErrorCode::DimensionMismatch, "C must be " + std::to_string(nv) + "x" + std::to_string(nv));
    for (auto v : others)
        if (g.degree(v) < 2)
            throw Error(ErrorCode::DegreeTooSmall, "vertex '" + g.vertex_id(v) + "' has degree below 2");

    const auto m = static_cast<Eigen::Index>(g.dim());
    const KLayout& L = g.layout();
    CMatrix A = CMatrix::Zero(m, m), B = CMatrix::Zero(m, m);
    for (auto idx : L.vertex_indices[*vs])
        A(idx, idx) = 1.0;
    for (Eigen::Index a = 0; a < nv; ++a) {
        const auto& La = L.vertex_indices[others[a]];
        const double n = double(La.size());
        for (std::size_t r = 0; r < La.size(); ++r)
            for (std::size_t c = 0; c < La.size(); ++c) {
                A(La[r], La[c]) = (r == c ? 1.0 : 0.0) - 1.0 / n;
                B(La[r], La[c]) = 1.0;
            }
        for (Eigen::Index b = 0; b < nv; ++b) {
            const auto last = L.vertex_indices[others[b]].back();
            for (auto row : La)
                A(row, last) -= C(a, b);
        }
    }
    return BoundaryConditions(A, B);
}

CMatrix projection_complement(const CMatrix& A, const CMatrix& B)
{
    require_square_pair(A, B);
    CMatrix AB = concat(A, B);
    CMatrix G = A * A.adjoint() + B * B.adjoint();
    Eigen::LDLT<CMatrix> ldlt(G);
    if (ldlt.info() != Eigen::Success || !check_rank(A, B))
        throw Error(ErrorCode::RankDeficient, "AA* + BB* is singular");
    return AB.adjoint() * ldlt.solve(AB);
}

bool equivalent(const BoundaryConditions& a, const BoundaryConditions& b, double tol)
{
    if (a.dim() != b.dim())
        throw Error(ErrorCode::DimensionMismatch, "boundary conditions act on spaces of different size");
    return (a.complement_projector() - b.complement_projector()).norm() < tol;
}

CMatrix smatrix(const CMatrix& A, const CMatrix& B, cplx k)
{
    require_square_pair(A, B);
    CMatrix X;
    if (!checked_solve(A + I_unit * k * B, A - I_unit * k * B, X))
        throw Error(ErrorCode::SingularAtK, "A + ikB is singular");
    return -X;
}

CMatrix smatrix(const BoundaryConditions& bc, cplx k)
{
    return smatrix(bc.A(), bc.B(), k);
}

CMatrix smatrix_closed_form(int alpha, const CVector& g, cplx k)
{
    const Eigen::Index n = g.size();
    const CVector h = CVector::Ones(n);
    const cplx gh = g.adjoint() * h;
    CMatrix S = -CMatrix::Identity(n, n);
    if (alpha == 0) {
        cplx den = 1.0 + I_unit * k * gh;
        if (std::abs(den) < 1e-14)
            throw Error(ErrorCode::PoleAtK, "1 + ik<g,h> vanishes");
        S += (2.0 * I_unit * k / den) * h * g.adjoint();
    } else if (alpha == -1) {
        if (std::abs(gh) < 1e-14)
            throw Error(ErrorCode::PoleAtK, "<g,h> vanishes");
        S += (2.0 / gh) * h * g.adjoint();
    } else {
        throw Error(ErrorCode::InvalidParams, "alpha must be 0 or -1");
    }
    return S;
}

ClassificationReport classify_operator(const BoundaryConditions& bc, const ClassifyOptions& opts)
{
    ClassificationReport r;
    r.rank_ok = check_rank(bc.A(), bc.B());
    if (!r.rank_ok)
        throw Error(ErrorCode::RankDeficient, "rank of (A,B) is below m");
    const CMatrix AB = bc.A() * bc.B().adjoint();
    const double scale = std::max(1.0, AB.norm());
    r.max_eig_re_ab = bc.dim() ? max_hermitian_eigenvalue(hermitian_part(AB)) : 0.0;
    r.max_eig_im_ab = bc.dim() ? max_hermitian_eigenvalue(antihermitian_part(AB)) : 0.0;
    r.re_ab_neg_semidef = r.max_eig_re_ab <= opts.tol * scale;
    r.im_ab_neg_semidef = r.max_eig_im_ab <= opts.tol * scale;
    const CMatrix skew = AB - AB.adjoint();
    r.self_adjoint_discrepancy = skew.size() ? skew.cwiseAbs().maxCoeff() : 0.0;
    r.self_adjoint = r.self_adjoint_discrepancy <= opts.tol * scale;
    auto contraction = [&bc](cplx k) {
        try {
            return spectral_norm(smatrix(bc, k)) <= 1.0 + 1e-9;
        } catch (const Error&) {
            return false;
        }
    };
    for (double kappa : opts.kappas)
        r.s_contraction.emplace_back(kappa, contraction(cplx(0.0, kappa)));
    for (double k : opts.ks)
        r.s_minus_k_contraction.emplace_back(k, contraction(cplx(-k, 0.0)));
    r.accretivity_note = r.re_ab_neg_semidef
                             ? "sufficient_accretive: Re(AB*) <= 0 implies m-accretive"
                             : "inconclusive: Re(AB*) <= 0 is sufficient, not necessary, for m-accretivity";
    return r;
}

std::vector<VertexConditions> decompose_local(const MetricGraph& g, const BoundaryConditions& bc, double tol)
{
    const auto m = static_cast<Eigen::Index>(g.dim());
    if (bc.dim() != m)
        throw Error(ErrorCode::DimensionMismatch, "conditions do not match the graph");
    const CMatrix& N = bc.kernel();
    const KLayout& L = g.layout();
    std::vector<VertexConditions> out;
    Eigen::Index total = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto& Lv = L.vertex_indices[v];
        const auto d = static_cast<Eigen::Index>(Lv.size());
        std::vector<bool> inside(2 * m, false);
        for (auto idx : Lv) {
            inside[idx] = true;
            inside[m + idx] = true;
        }
        CMatrix out_rows(2 * m - 2 * d, N.cols());
        Eigen::Index r = 0;
        for (Eigen::Index row = 0; row < 2 * m; ++row)
            if (!inside[row])
                out_rows.row(r++) = N.row(row);
        CMatrix coef = kernel_basis_abs(out_rows, tol);
        CMatrix Mv = N * coef;
        total += Mv.cols();
        if (Mv.cols() != d)
            throw Error(ErrorCode::NotLocal, "M(A,B) restricted to vertex '" + g.vertex_id(v) + "' has dimension " +
                                                 std::to_string(Mv.cols()) + ", degree is " + std::to_string(d));
        CMatrix local(2 * d, d);
        for (Eigen::Index p = 0; p < d; ++p) {
            local.row(p) = Mv.row(Lv[p]);
            local.row(d + p) = Mv.row(m + Lv[p]);
        }
        CMatrix W = kernel_basis_abs(local.adjoint(), tol);
        CMatrix rows = W.adjoint();
        out.push_back({g.vertex_id(v), rows.leftCols(d), rows.rightCols(d)});
    }
    if (total != m)
        throw Error(ErrorCode::NotLocal, "vertex subspaces do not span M(A,B)");
    return out;
}

ContinuityForm continuity_form(const CMatrix& Av, const CMatrix& Bv, double tol)
{
    require_square_pair(Av, Bv);
    const Eigen::Index n = Av.rows();
    const double scale = concat(Av, Bv).norm();
    const CMatrix A = Av / scale, B = Bv / scale;
    const CVector h = CVector::Ones(n);
    ContinuityForm f;
    if (B.norm() <= tol) {
        f.kind = ContinuityForm::Kind::Dirichlet;
        f.alpha = 0;
        f.g = CVector::Zero(n);
        f.gamma = 1.0;
        f.p = CVector::Zero(n);
        return f;
    }
    const CMatrix M = kernel_basis(concat(A, B));
    const CMatrix X0 = M.topRows(n), X1 = M.bottomRows(n);
    const CMatrix Ph = CMatrix::Identity(n, n) - h * h.adjoint() / double(n);
    if ((Ph * X0).norm() > tol)
        throw Error(ErrorCode::NotContinuous, "a kernel vector has non-constant values at the vertex");

    static const double pairs[][2] = {{0.7317, 1.9131}, {1.2345, 3.3917}, {0.4142, 2.7183}};
    int alpha = 1;
    CMatrix S1;
    for (const auto& pr : pairs) {
        try {
            S1 = smatrix(A, B, cplx(0.0, pr[0]));
            CMatrix S2 = smatrix(A, B, cplx(0.0, pr[1]));
            alpha = (S1 - S2).norm() <= tol * std::max(1.0, S1.norm()) ? -1 : 0;
            break;
        } catch (const Error&) {
        }
    }
    if (alpha == 1)
        throw Error(ErrorCode::NotContinuous, "S(i kappa) is singular at every probe point");

    f.kind = ContinuityForm::Kind::Generic;
    f.alpha = alpha;
    if (alpha == -1) {
        CMatrix IS = CMatrix::Identity(n, n) + S1;
        Eigen::RowVectorXcd r = IS.colwise().sum() / double(n);
        CVector gt = r.adjoint();
        cplx sgt = gt.adjoint() * h;
        f.g = gt * (-double(n) / std::conj(sgt));
    } else {
        CMatrix G;
        if (!checked_solve(X1.transpose(), X0.transpose(), G, 1e-10))
            throw Error(ErrorCode::NotContinuous, "kernel is not a graph over the derivative traces");
        // G^T = X0 X1^{-1}; every row equals -g^*.
        CMatrix K = G.transpose();
        Eigen::RowVectorXcd r = K.colwise().sum() / double(n);
        f.g = -r.adjoint();
    }

    CVector pbar = f.g.conjugate();
    cplx sp = pbar.sum();
    if (alpha == -1) {
        f.gamma = 0.0;
        f.p = pbar * (double(n) / sp);
    } else if (std::abs(sp) > tol) {
        f.gamma = -double(n) / sp;
        f.p = pbar * (double(n) / sp);
    } else {
        f.gamma = -1.0;
        f.p = pbar;
    }

    VertexConditions back = form_matrices(f);
    if ((projection_complement(back.A, back.B) - projection_complement(A, B)).norm() > 1e3 * tol)
        throw Error(ErrorCode::NotContinuous, "conditions are not of continuity type");
    return f;
}

std::vector<ContinuityForm> continuity_forms(const MetricGraph& g, const BoundaryConditions& bc)
{
    std::vector<VertexConditions> blocks;
    try {
        blocks = decompose_local(g, bc);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotLocal)
            throw Error(ErrorCode::NotLocalInput, e.what());
        throw;
    }
    std::vector<ContinuityForm> out;
    for (const auto& b : blocks) {
        try {
            out.push_back(continuity_form(b.A, b.B));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotContinuous)
                throw Error(ErrorCode::NotContinuous, "vertex '" + b.vertex + "': " + e.what());
            throw;
        }
    }
    return out;
}

VertexConditions form_matrices(const ContinuityForm& f)
{
    const auto n = static_cast<std::size_t>(f.g.size());
    if (f.kind == ContinuityForm::Kind::Dirichlet)
        return make_vertex_conditions(VertexSpec::dirichlet(), n);
    return make_vertex_conditions(VertexSpec::generic(f.alpha, f.g), n);
}

CMatrix smatrix_of_form(const ContinuityForm& f, cplx k)
{
    const Eigen::Index n = f.g.size();
    if (f.kind == ContinuityForm::Kind::Dirichlet)
        return -CMatrix::Identity(n, n);
    return smatrix_closed_form(f.alpha, f.g, k);
}

const char* positivity_name(PositivityClass c)
{
    switch (c) {
    case PositivityClass::StrictlyPositive: return "strictly_positive";
    case PositivityClass::Positive: return "positive";
    case PositivityClass::NotPositive: return "not_positive";
    }
    return "not_positive";
}

PositivityReport positivity_class(const ContinuityForm& f)
{
    PositivityReport rep;
    const Eigen::Index n = f.g.size();
    if (f.kind == ContinuityForm::Kind::Dirichlet) {
        rep.cls = PositivityClass::Positive;
    } else {
        int sd = sign_definiteness(f.g, vector_tol(f.g));
        rep.cls = sd == 2 ? PositivityClass::StrictlyPositive
                          : (sd == 1 ? PositivityClass::Positive : PositivityClass::NotPositive);
    }
    const double gh = std::abs(f.g_dot_h());
    const double kappa0 = gh > 0.0 ? 2.0 / gh : 1.0;
    const double base = std::max(kappa0, 1.0);
    rep.grid_nonnegative = true;
    rep.min_entry = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 6; ++j) {
        const double kappa = base * std::ldexp(1.0, j);
        rep.kappa_grid.push_back(kappa);
        CMatrix P = CMatrix::Identity(n, n) + smatrix_of_form(f, cplx(0.0, kappa));
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) {
                rep.min_entry = std::min(rep.min_entry, P(r, c).real());
                if (P(r, c).real() < -1e-12 || std::abs(P(r, c).imag()) > 1e-12)
                    rep.grid_nonnegative = false;
            }
    }
    return rep;
}

SubstochasticReport substochastic_check(const ContinuityForm& f, double kappa)
{
    SubstochasticReport r;
    if (f.kind == ContinuityForm::Kind::Dirichlet) {
        r.substochastic = true;
        r.factor = -1.0;
        return r;
    }
    if (f.alpha == -1) {
        r.substochastic = true;
        r.factor = 1.0;
        return r;
    }
    const cplx s = f.g_dot_h();
    const cplx den = kappa * s - 1.0;
    if (std::abs(den) < 1e-14)
        throw Error(ErrorCode::PoleAtK, "kappa <g,h> = 1");
    r.factor = (kappa * s + 1.0) / den;
    const double tol = vector_tol(f.g);
    r.substochastic = std::abs(s.imag()) <= tol && s.real() <= tol;
    return r;
}

const char* feller_name(FellerVerdict v)
{
    switch (v) {
    case FellerVerdict::YesIff: return "yes_iff";
    case FellerVerdict::YesSufficient: return "yes_sufficient";
    case FellerVerdict::No: return "no";
    case FellerVerdict::Unknown: return "unknown";
    }
    return "unknown";
}

FellerVerdict feller_check(const MetricGraph& g, const std::vector<ContinuityForm>& forms)
{
    if (forms.size() != g.num_vertices())
        throw Error(ErrorCode::DimensionMismatch, "one continuity form per vertex expected");
    if (g.num_internal() == 0) {
        for (const auto& f : forms) {
            if (f.kind == ContinuityForm::Kind::Dirichlet)
                continue;
            const double tol = vector_tol(f.g);
            if (!is_real_vector(f.g, tol) || f.g.real().maxCoeff() > tol)
                return FellerVerdict::No;
            if (f.alpha == -1 && f.g.norm() <= tol)
                return FellerVerdict::No;
        }
        return FellerVerdict::YesIff;
    }
    if (g.has_tadpoles())
        throw Error(ErrorCode::TadpolePresent, "the sufficient Feller test needs a tadpole-free graph");
    for (const auto& f : forms) {
        if (f.kind == ContinuityForm::Kind::Dirichlet)
            continue;
        const double tol = vector_tol(f.g);
        if (!is_real_vector(f.g, tol) || f.g.real().maxCoeff() >= -tol)
            return FellerVerdict::Unknown;
    }
    return FellerVerdict::YesSufficient;
}

FellerVerdict feller_check(const MetricGraph& g, const BoundaryConditions& bc)
{
    std::vector<ContinuityForm> forms;
    try {
        forms = continuity_forms(g, bc);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotContinuous && e.code() != ErrorCode::NotLocalInput)
            throw;
        if (g.num_internal() == 0)
            return FellerVerdict::No;
        if (g.has_tadpoles())
            throw Error(ErrorCode::TadpolePresent, "the sufficient Feller test needs a tadpole-free graph");
        return FellerVerdict::Unknown;
    }
    return feller_check(g, forms);
}

std::vector<cplx> vertex_spectrum(const ContinuityForm& f, double kappa)
{
    Eigen::ComplexEigenSolver<CMatrix> es(smatrix_of_form(f, cplx(0.0, kappa)), false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return out;
}

} // namespace mgsg
