#include "mgsg/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mgsg/error.hpp"
#include "mgsg/fd.hpp"
#include "mgsg/resolvent.hpp"

namespace mgsg {

namespace {

const double pi = 3.14159265358979323846;

// Largest lambda = kappa^2 > 0 with -lambda an eigenvalue of -Delta, or 0.
double bound_state_shift(const MetricGraph& g, const BoundaryConditions& bc)
{
    double shift = 0.0;
    try {
        for (double kappa : eigenvalue_scan(g, bc, 0.0, 50.0))
            shift = std::max(shift, kappa * kappa);
    } catch (const Error&) {
    }
    return shift;
}

GraphFunction talbot(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0, double t, int nodes,
                     double shift)
{
    const int M = std::max(2, nodes / 2);
    const double r = 2.0 * M / (5.0 * t);
    GraphFunction acc = GraphFunction::zeros_like(psi0);
    for (int q = -(M - 1); q <= M - 1; ++q) {
        const double th = pi * q / M;
        cplx s;
        double sigma;
        if (q == 0) {
            s = r;
            sigma = 0.0;
        } else {
            const double ct = std::cos(th) / std::sin(th);
            s = r * th * cplx(ct, 1.0);
            sigma = th + (th * ct - 1.0) * ct;
        }
        s += shift;
        const cplx w = (r / (2.0 * M)) * std::exp(t * s) * cplx(1.0, sigma);
        if (std::abs(w) < 1e-300)
            continue;
        // (s - Delta)^{-1} = (-Delta - k^2)^{-1} with k^2 = -s, Im k > 0.
        const cplx k = I_unit * std::sqrt(s);
        ResolventResult res;
        try {
            res = resolvent_apply(g, bc, k, psi0);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularAtK || e.code() == ErrorCode::NotInResolventSet)
                throw Error(ErrorCode::NotAGenerator, std::string("resolvent undefined on the contour: ") + e.what());
            throw;
        }
        for (std::size_t j = 0; j < acc.edges.size(); ++j)
            for (std::size_t n = 0; n < acc.edges[j].values.size(); ++n)
                acc.edges[j].values[n] += w * res.psi.edges[j].values[n];
    }
    return acc;
}

} // namespace

double external_extent_for(double t)
{
    return std::max(10.0, 24.0 * std::sqrt(std::max(t, 0.0)));
}

EvolutionResult evolve_spectral(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0, double t,
                                const TalbotOptions& opts)
{
    if (t < 0.0)
        throw Error(ErrorCode::InvalidParams, "time must be nonnegative");
    EvolutionResult out;
    for (const auto& e : psi0.edges)
        for (std::size_t n = 1; n + 1 < e.values.size(); ++n)
            out.interpolation_error =
                std::max(out.interpolation_error, std::abs(e.values[n - 1] - 2.0 * e.values[n] + e.values[n + 1]) / 8.0);
    if (t == 0.0) {
        out.psi = psi0;
        return out;
    }
    out.shift = bound_state_shift(g, bc);
    GraphFunction coarse = talbot(g, bc, psi0, t, opts.nodes, out.shift);
    out.psi = talbot(g, bc, psi0, t, 2 * opts.nodes, out.shift);
    out.contour_error = coarse.max_abs_difference(out.psi);
    if (!(out.contour_error <= opts.tol * std::max(1.0, psi0.sup_norm())))
        throw Error(ErrorCode::ContourFailure, "contour estimate " + std::to_string(out.contour_error) + " above tolerance");
    return out;
}

GraphFunction evolve_fd_oracle(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0, double t,
                               double h, double dt)
{
    if (!(t >= 0.0) || !(dt > 0.0))
        throw Error(ErrorCode::InvalidParams, "time and step must be positive");
    double extent = 1.0;
    for (std::size_t j = 0; j < g.num_external(); ++j)
        extent = std::max(extent, psi0.edges.at(j).extent());
    FdOperator op(g, bc, h, extent);
    CVector u = op.from_function(psi0);
    if (t == 0.0)
        return op.to_function(u);

    const int steps = std::max(2, static_cast<int>(std::ceil(t / dt - 1e-9)));
    const double tau = t / steps;
    SparseC lhs = op.stiffness() * (tau / 2.0);
    for (Eigen::Index i = 0; i < op.size(); ++i)
        if (op.mass()(i) != 0.0)
            lhs.coeffRef(i, i) += 1.0;
    Eigen::SparseLU<SparseC> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorCode::LinearSolveFailure, "Crank-Nicolson matrix is singular");

    const Eigen::VectorXd& mass = op.mass();
    // Four backward Euler steps of tau/2 damp the incompatible part of the data.
    for (int s = 0; s < 4; ++s) {
        CVector rhs = mass.cast<cplx>().cwiseProduct(u);
        u = lu.solve(rhs);
    }
    for (int s = 2; s < steps; ++s) {
        CVector Ku = op.stiffness() * u;
        CVector rhs = mass.cast<cplx>().cwiseProduct(u - (tau / 2.0) * Ku);
        u = lu.solve(rhs);
    }
    return op.to_function(u);
}

bool SemigroupReport::all_ok() const
{
    for (const auto& c : checks)
        if (!c.contraction || !c.positive || !c.continuous)
            return false;
    return true;
}

SemigroupReport verify_semigroup_properties(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0,
                                            const std::vector<double>& times, const TalbotOptions& opts, double tol)
{
    SemigroupReport rep;
    rep.accretive = classify_operator(bc).re_ab_neg_semidef;
    try {
        auto forms = continuity_forms(g, bc);
        rep.continuity_class = true;
        rep.positive_class = std::all_of(forms.begin(), forms.end(), [](const ContinuityForm& f) {
            return positivity_class(f).cls != PositivityClass::NotPositive;
        });
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotContinuous && e.code() != ErrorCode::NotLocalInput)
            throw;
    }
    const bool data_positive = psi0.min_real() >= 0.0 && psi0.max_abs_imag() == 0.0;
    const bool data_continuous = continuity_mismatch(g, psi0) <= 1e-12;
    const double norm0 = psi0.l2_norm();
    for (double t : times) {
        auto ev = evolve_spectral(g, bc, psi0, t, opts);
        SemigroupCheck c;
        c.t = t;
        c.error_estimate = ev.error_estimate();
        c.norm0 = norm0;
        c.norm_t = ev.psi.l2_norm();
        if (rep.accretive)
            c.contraction = c.norm_t <= norm0 + tol;
        c.min_real = ev.psi.min_real();
        c.max_abs_imag = ev.psi.max_abs_imag();
        if (rep.positive_class && data_positive) {
            c.positivity_tested = true;
            c.positive = c.min_real >= -tol && c.max_abs_imag <= tol;
        }
        if (rep.continuity_class && data_continuous) {
            c.continuity_tested = true;
            c.continuity = continuity_mismatch(g, ev.psi);
            c.continuous = c.continuity <= tol;
        }
        rep.checks.push_back(c);
    }
    return rep;
}

std::optional<PositivityWitness> search_positivity_witness(const MetricGraph& g, const BoundaryConditions& bc, double t,
                                                           std::uint64_t seed, int attempts, double step)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double extent = external_extent_for(t);
    for (int a = 0; a < attempts; ++a) {
        // A hat function on one edge, placed near one of its ends.
        const std::size_t edge = static_cast<std::size_t>(unit(rng) * double(g.num_edges())) % g.num_edges();
        const double len = g.is_external(edge) ? 2.0 : g.length(edge);
        const double width = (0.05 + 0.45 * unit(rng)) * len;
        const double centre = unit(rng) < 0.5 || g.is_external(edge) ? width * unit(rng) : len - width * unit(rng);
        const double height = 0.5 + unit(rng);
        auto psi0 = GraphFunction::sample(g, step, extent, [&](std::size_t j, double x) {
            if (j != edge)
                return cplx(0.0);
            return cplx(height * std::max(0.0, 1.0 - std::abs(x - centre) / width));
        });
        auto ev = evolve_spectral(g, bc, psi0, t);
        PositivityWitness w;
        w.value = 0.0;
        for (std::size_t j = 0; j < ev.psi.edges.size(); ++j)
            for (std::size_t n = 0; n < ev.psi.edges[j].values.size(); ++n)
                if (ev.psi.edges[j].values[n].real() < w.value) {
                    w.value = ev.psi.edges[j].values[n].real();
                    w.edge = j;
                    w.x = ev.psi.edges[j].x(n);
                }
        if (w.value < -1e-6) {
            w.psi0 = psi0;
            w.attempt = a;
            return w;
        }
    }
    return std::nullopt;
}

} // namespace mgsg
