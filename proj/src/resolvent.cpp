#include "mgsg/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mgsg/error.hpp"

namespace mgsg {

GreenKernel::GreenKernel(const MetricGraph& g, const BoundaryConditions& bc, cplx k) : g_(&g), k_(k)
{
    const auto m = static_cast<Eigen::Index>(g.dim());
    if (bc.dim() != m)
        throw Error(ErrorCode::DimensionMismatch, "conditions do not match the graph");
    if (!(k.imag() > 0.0))
        throw Error(ErrorCode::InvalidParams, "the Green kernel needs Im k > 0");
    S_ = smatrix(bc, k);
    T_ = CMatrix::Zero(m, m);
    Rp_ = CVector::Ones(m);
    const auto nE = static_cast<Eigen::Index>(g.num_external());
    const auto nI = static_cast<Eigen::Index>(g.num_internal());
    for (Eigen::Index i = 0; i < nI; ++i) {
        const double a = g.length(nE + i);
        const cplx e = std::exp(I_unit * k * a);
        T_(nE + i, nE + nI + i) = e;
        T_(nE + nI + i, nE + i) = e;
        Rp_(nE + nI + i) = std::exp(-I_unit * k * a);
    }
    CMatrix X;
    if (!checked_solve(CMatrix::Identity(m, m) - S_ * T_, S_, X))
        throw Error(ErrorCode::NotInResolventSet, "I - S T is singular");
    core_ = X;
}

CVector GreenKernel::phi_tilde(std::size_t j, double x) const
{
    CVector v = CVector::Zero(static_cast<Eigen::Index>(g_->dim()));
    v(g_->k_index(j, End::Initial)) = std::exp(I_unit * k_ * x);
    if (!g_->is_external(j))
        v(g_->k_index(j, End::Terminal)) = std::exp(I_unit * k_ * (g_->length(j) - x));
    return v;
}

CVector GreenKernel::phi_tilde_dx(std::size_t j, double x) const
{
    const cplx lam = I_unit * k_;
    CVector v = CVector::Zero(static_cast<Eigen::Index>(g_->dim()));
    v(g_->k_index(j, End::Initial)) = lam * std::exp(lam * x);
    if (!g_->is_external(j))
        v(g_->k_index(j, End::Terminal)) = -lam * std::exp(lam * (g_->length(j) - x));
    return v;
}

cplx GreenKernel::scattered(std::size_t j, double x, std::size_t jp, double y) const
{
    const cplx pre = I_unit / (2.0 * k_);
    return pre * (phi_tilde(j, x).transpose() * core_ * phi_tilde(jp, y)).value();
}

cplx GreenKernel::operator()(std::size_t j, double x, std::size_t jp, double y) const
{
    cplx r = scattered(j, x, jp, y);
    if (j == jp)
        r += I_unit / (2.0 * k_) * std::exp(I_unit * k_ * std::abs(x - y));
    return r;
}

namespace {

// The two terms A X and kappa B Y of the secular matrix.
std::pair<CMatrix, CMatrix> secular_parts(const MetricGraph& g, const BoundaryConditions& bc, double kappa, bool balanced)
{
    const auto m = static_cast<Eigen::Index>(g.dim());
    const auto nE = static_cast<Eigen::Index>(g.num_external());
    const auto nI = static_cast<Eigen::Index>(g.num_internal());
    CMatrix X = CMatrix::Zero(m, m), Y = CMatrix::Zero(m, m);
    for (Eigen::Index e = 0; e < nE; ++e) {
        X(e, e) = 1.0;
        Y(e, e) = 1.0;
    }
    for (Eigen::Index i = 0; i < nI; ++i) {
        const double a = g.length(nE + i);
        const Eigen::Index lo = nE + i, hi = nE + nI + i;
        const double em = std::exp(-kappa * a);
        const double ep = balanced ? 1.0 : std::exp(kappa * a);
        const double b0 = balanced ? em : 1.0;
        X(lo, lo) = 1.0;
        X(lo, hi) = b0;
        X(hi, lo) = em;
        X(hi, hi) = ep;
        Y(lo, lo) = 1.0;
        Y(lo, hi) = -b0;
        Y(hi, lo) = -em;
        Y(hi, hi) = ep;
    }
    return {bc.A() * X, kappa * bc.B() * Y};
}

} // namespace

CMatrix secular_matrix(const MetricGraph& g, const BoundaryConditions& bc, double kappa, bool balanced)
{
    auto [ax, by] = secular_parts(g, bc, kappa, balanced);
    return ax - by;
}

std::vector<double> eigenvalue_scan(const MetricGraph& g, const BoundaryConditions& bc, double lo, double hi,
                                    const ScanOptions& opts)
{
    if (!(hi > 0.0) || !(hi > lo) || lo < 0.0 || opts.grid_points < 2)
        throw Error(ErrorCode::EmptyRange, "kappa range must satisfy 0 <= lo < hi");
    if (lo == 0.0)
        lo = hi * 1e-6;
    auto det = [&](double kappa) { return secular_matrix(g, bc, kappa, true).determinant(); };

    const int n = opts.grid_points;
    std::vector<double> grid(n);
    std::vector<cplx> dets(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
        dets[i] = det(grid[i]);
    }
    cplx phase = 1.0;
    double dmax = 0.0;
    for (auto d : dets)
        dmax = std::max(dmax, std::abs(d));
    for (auto d : dets)
        if (std::abs(d) > 1e-8 * dmax) {
            phase = std::conj(d) / std::abs(d);
            break;
        }
    auto f = [&](double kappa) { return (phase * det(kappa)).real(); };

    auto is_singular = [&](double kappa) {
        auto [ax, by] = secular_parts(g, bc, kappa, true);
        Eigen::JacobiSVD<CMatrix> svd(ax - by);
        const auto& sv = svd.singularValues();
        const double scale = std::max(ax.norm(), by.norm());
        return sv.size() == 0 || sv(sv.size() - 1) <= opts.singular_ratio * scale;
    };

    std::vector<double> roots;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i)
        vals[i] = (phase * dets[i]).real();
    for (int i = 0; i + 1 < n; ++i) {
        double a = grid[i], b = grid[i + 1];
        double fa = vals[i], fb = vals[i + 1];
        if (fa == 0.0) {
            if (is_singular(a))
                roots.push_back(a);
            continue;
        }
        if (fa * fb > 0.0 || fb == 0.0)
            continue;
        while (b - a > opts.tol) {
            const double c = 0.5 * (a + b);
            const double fc = f(c);
            if (fc == 0.0) {
                a = b = c;
                break;
            }
            if ((fa < 0.0) == (fc < 0.0)) {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        const double root = 0.5 * (a + b);
        if (is_singular(root))
            roots.push_back(root);
    }
    if (vals[n - 1] == 0.0 && is_singular(grid[n - 1]))
        roots.push_back(grid[n - 1]);
    return roots;
}

namespace {

// E0 = int_0^h e^{lam (h - s)} ds, E1 = int_0^h e^{lam (h - s)} s ds.
void cell_weights(cplx lam, double h, cplx& E0, cplx& E1)
{
    const cplx z = lam * h;
    if (std::abs(z) < 0.1) {
        cplx t0 = 0.0, t1 = 0.0, p = 1.0;
        double f0 = 1.0, f1 = 2.0;  // 1/(n+1)!, 1/(n+2)!
        for (int n = 0; n < 12; ++n) {
            t0 += p / f0;
            t1 += p / f1;
            p *= z;
            f0 *= double(n + 2);
            f1 *= double(n + 3);
        }
        E0 = h * t0;
        E1 = h * h * t1;
    } else {
        const cplx ez = std::exp(z);
        E0 = (ez - 1.0) / lam;
        E1 = (ez - 1.0 - z) / (lam * lam);
    }
}

} // namespace

ResolventResult resolvent_apply(const MetricGraph& g, const BoundaryConditions& bc, cplx k, const GraphFunction& phi)
{
    GreenKernel G(g, bc, k);
    return resolvent_apply(G, g, phi);
}

ResolventResult resolvent_apply(const GreenKernel& G, const MetricGraph& g, const GraphFunction& phi)
{
    if (phi.edges.size() != g.num_edges())
        throw Error(ErrorCode::DimensionMismatch, "function does not match the graph");
    const cplx k = G.k();
    const cplx lam = I_unit * k;
    const cplx pre = I_unit / (2.0 * k);
    const auto m = static_cast<Eigen::Index>(g.dim());

    std::vector<std::vector<cplx>> F(g.num_edges()), Gb(g.num_edges());
    CVector c = CVector::Zero(m);
    ResolventResult out;
    for (std::size_t j = 0; j < g.num_edges(); ++j) {
        const EdgeSamples& e = phi.edges[j];
        const std::size_t N = e.intervals();
        if (N < 1)
            throw Error(ErrorCode::InvalidParams, "edge '" + g.edge_id(j) + "' has fewer than two samples");
        if (!g.is_external(j) && std::abs(e.extent() - g.length(j)) > 1e-9 * g.length(j))
            throw Error(ErrorCode::DimensionMismatch, "samples on edge '" + g.edge_id(j) + "' do not cover [0,a]");
        cplx E0, E1;
        cell_weights(lam, e.step, E0, E1);
        const cplx eh = std::exp(lam * e.step);
        auto& f = F[j];
        auto& b = Gb[j];
        f.assign(N + 1, 0.0);
        b.assign(N + 1, 0.0);
        for (std::size_t n = 0; n < N; ++n)
            f[n + 1] = eh * f[n] + e.values[n] * E0 + (e.values[n + 1] - e.values[n]) * (E1 / e.step);
        if (g.is_external(j)) {
            b[N] = -e.values[N] / lam;
            out.tail_estimate += std::abs(e.values[N]) / std::norm(k);
        }
        for (std::size_t n = N; n-- > 0;)
            b[n] = eh * b[n + 1] + e.values[n + 1] * E0 - (e.values[n + 1] - e.values[n]) * (E1 / e.step);
        c(g.k_index(j, End::Initial)) = b[0];
        if (!g.is_external(j))
            c(g.k_index(j, End::Terminal)) = f[N];
    }
    const CVector w = G.core() * c;

    out.psi = GraphFunction::zeros_like(phi);
    out.dpsi = GraphFunction::zeros_like(phi);
    for (std::size_t j = 0; j < g.num_edges(); ++j) {
        const EdgeSamples& e = phi.edges[j];
        for (std::size_t n = 0; n <= e.intervals(); ++n) {
            const double x = e.x(n);
            const cplx sep = (G.phi_tilde(j, x).transpose() * w).value();
            const cplx dsep = (G.phi_tilde_dx(j, x).transpose() * w).value();
            out.psi.edges[j].values[n] = pre * (F[j][n] + Gb[j][n] + sep);
            out.dpsi.edges[j].values[n] = pre * (lam * (F[j][n] - Gb[j][n]) + dsep);
        }
    }
    return out;
}

namespace {

double sample_extent(const MetricGraph& g, std::size_t j, double kappa)
{
    return g.is_external(j) ? 40.0 / kappa : g.length(j);
}

} // namespace

std::vector<KernelSample> sample_kernel(const MetricGraph& g, const GreenKernel& G, int n)
{
    const double kappa = G.k().imag();
    std::vector<KernelSample> out;
    for (std::size_t j = 0; j < g.num_edges(); ++j)
        for (std::size_t jp = 0; jp < g.num_edges(); ++jp) {
            const double Lx = sample_extent(g, j, kappa), Ly = sample_extent(g, jp, kappa);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    const double x = Lx * p / double(n - 1), y = Ly * q / double(n - 1);
                    out.push_back({j, jp, x, y, G(j, x, jp, y)});
                }
        }
    return out;
}

FellerNorm feller_sup_norm(const MetricGraph& g, const BoundaryConditions& bc, double kappa, int points_per_edge)
{
    if (!(kappa > 0.0))
        throw Error(ErrorCode::InvalidParams, "kappa must be positive");
    GreenKernel G(g, bc, cplx(0.0, kappa));
    for (const auto& s : sample_kernel(g, G, 16)) {
        const double scale = 1.0 / (2.0 * kappa);
        if (s.value.real() < -1e-12 || std::abs(s.value.imag()) > 1e-12 * std::max(1.0, scale))
            throw Error(ErrorCode::NonpositiveKernel,
                        "kernel entry (" + g.edge_id(s.j) + "," + g.edge_id(s.jp) + ") at x=" + std::to_string(s.x) +
                            ", y=" + std::to_string(s.y) + " is " + std::to_string(s.value.real()));
    }
    const auto m = static_cast<Eigen::Index>(g.dim());
    const CVector w = G.core() * ((CMatrix::Identity(m, m) - G.T()) * CVector::Ones(m));
    const double k2 = kappa * kappa;
    if (points_per_edge % 2 == 0)
        ++points_per_edge;

    FellerNorm best;
    best.value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.num_edges(); ++j) {
        const double L = sample_extent(g, j, kappa);
        for (int p = 0; p < points_per_edge; ++p) {
            const double x = L * p / double(points_per_edge - 1);
            double u0 = 1.0 / k2 - std::exp(-kappa * x) / (2.0 * k2);
            if (!g.is_external(j))
                u0 -= std::exp(-kappa * (L - x)) / (2.0 * k2);
            const cplx u1 = (1.0 / (2.0 * k2)) * (G.phi_tilde(j, x).transpose() * w).value();
            const double u = u0 + u1.real();
            if (u > best.value) {
                best = {u, j, x};
            }
        }
    }
    return best;
}

} // namespace mgsg
