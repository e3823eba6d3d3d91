// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fixtures.hpp"
#include "mgsg/error.hpp"
#include "mgsg/fd.hpp"
#include "mgsg/resolvent.hpp"
#include "mgsg/semigroup.hpp"
#include "mgsg/walks.hpp"

using namespace mgsg;

namespace {

const double pi = 3.14159265358979323846;

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            detail.str("");
            detail << "failed: " << what;
        }
    }
};

double max_abs(const CMatrix& M)
{
    return M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
}

double max_hermitian_eig(const CMatrix& H)
{
    return Eigen::SelfAdjointEigenSolver<CMatrix>(H, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double spectral_norm(const CMatrix& M)
{
    return Eigen::JacobiSVD<CMatrix>(M).singularValues()(0);
}

// S(k) = -(A + ikB)^{-1}(A - ikB), computed here without the library.
CMatrix direct_smatrix(const CMatrix& A, const CMatrix& B, cplx k)
{
    const cplx ik = cplx(0.0, 1.0) * k;
    return -Eigen::PartialPivLU<CMatrix>(A + ik * B).solve(A - ik * B);
}

// Roots of (1 + 1/(2k))(-2 + 1/(2k)) = exp(-2ka)/(4k^2) on (0, hi] by sign changes and bisection.
std::vector<double> scalar_roots(double a, double hi)
{
    auto f = [a](double k) {
        return (1.0 + 0.5 / k) * (-2.0 + 0.5 / k) - std::exp(-2.0 * k * a) / (4.0 * k * k);
    };
    std::vector<double> roots;
    const int n = 200000;
    double lo = 1e-4, flo = f(lo);
    for (int i = 1; i <= n; ++i) {
        double x = 1e-4 + (hi - 1e-4) * i / n, fx = f(x);
        if ((flo < 0) != (fx < 0)) {
            double l = lo, r = x;
            for (int it = 0; it < 200 && r - l > 1e-15; ++it) {
                double m = 0.5 * (l + r);
                ((f(m) < 0) == (flo < 0) ? l : r) = m;
            }
            roots.push_back(0.5 * (l + r));
        }
        lo = x;
        flo = fx;
    }
    return roots;
}

GraphFunction hat(const MetricGraph& g, std::size_t edge, double centre, double width, double extent)
{
    return GraphFunction::sample(g, 1.0 / 128, extent, [&](std::size_t j, double x) {
        if (j != edge)
            return cplx(0.0);
        double u = (x - centre) / width;
        return cplx(std::abs(u) < 1.0 ? std::pow(std::cos(pi * u / 2.0), 2) : 0.0);
    });
}

double compare(const GraphFunction& a, const GraphFunction& b)
{
    double d = 0.0;
    for (std::size_t j = 0; j < a.edges.size(); ++j)
        for (std::size_t n = 0; n < a.edges[j].values.size(); ++n)
            d = std::max(d, std::abs(a.edges[j].values[n] - b.edges[j].at(a.edges[j].x(n))));
    return d;
}

void criterion1(Outcome& o)
{
    auto bc = fixtures::delta_pair();
    CMatrix AB = bc.A() * bc.B().adjoint();
    o.require(max_abs(AB - AB.adjoint()) == 0.0, "A B* is not exactly Hermitian");
    const double top = max_hermitian_eig(0.5 * (AB + AB.adjoint()));
    o.require(std::abs(top - 0.5) <= 1e-12, "largest eigenvalue of Re(A B*) is not 1/2");

    ScanOptions scan;
    scan.grid_points = 400;
    scan.tol = 1e-8;
    auto r1 = eigenvalue_scan(fixtures::line_graph(1.0), bc, 0.0, 50.0, scan);
    o.require(r1.empty(), "a = 1 has a root of det Z in (0, 50]");
    o.require(scalar_roots(1.0, 50.0).empty(), "independent scan finds a root at a = 1");
    auto r10 = eigenvalue_scan(fixtures::line_graph(10.0), bc, 0.0, 50.0, scan);
    auto ref = scalar_roots(10.0, 50.0);
    o.require(r10.size() == 1 && ref.size() == 1, "a = 10 does not give exactly one root");
    if (r10.size() == 1 && ref.size() == 1)
        o.require(std::abs(r10[0] - ref[0]) <= 1e-8, "a = 10 root disagrees with the scalar equation");
    if (o.ok)
        o.detail << "max eig Re(AB*) = " << top << ", a=1: no roots, a=10: kappa = " << r10[0] << " (scalar "
                 << ref[0] << ")";
}

void criterion2(Outcome& o)
{
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const cplx k(u(rng) - 2.0, u(rng));
        const auto m = 1 + t % 4;
        CMatrix I = CMatrix::Identity(m, m), Z = CMatrix::Zero(m, m);
        o.require(max_abs(smatrix(I, Z, k) + I) <= 1e-14, "Dirichlet S is not -I");
        o.require(max_abs(smatrix(Z, I, k) - I) <= 1e-14, "Neumann S is not I");
        auto kir = make_vertex_conditions(VertexSpec::standard(), 3);
        CMatrix want = CMatrix::Constant(3, 3, 2.0 / 3.0) - CMatrix::Identity(3, 3);
        o.require(max_abs(smatrix(kir.A, kir.B, k) - want) <= 1e-12, "standard degree-3 S is wrong");
    }
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 5;
        const int alpha = t % 2 ? -1 : 0;
        CVector g = fixtures::random_vector(rng, n);
        const cplx k(0.0, u(rng));
        auto vc = make_vertex_conditions(VertexSpec::generic(alpha, g), n);
        double d = max_abs(direct_smatrix(vc.A, vc.B, k) - smatrix_closed_form(alpha, g, k));
        worst = std::max(worst, d);
        o.require(d <= 1e-12, "closed form differs from the direct formula");
    }
    if (o.ok)
        o.detail << "Dirichlet/Neumann/standard exact, closed form max deviation " << worst << " over 100 cases";
}

void criterion3(Outcome& o)
{
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<int> md(1, 4), kind(0, 2);
    std::uniform_real_distribution<double> kd(0.3, 3.0);
    const double tol = 1e-9;
    int re_true = 0, im_true = 0;
    for (int t = 0; t < 200; ++t) {
        const auto m = md(rng);
        const double k0 = kd(rng);
        auto bc = fixtures::pair_with_smatrix(rng, m, kind(rng), t % 2 ? cplx(-k0, 0.0) : cplx(0.0, k0));
        const CMatrix& A = bc.A();
        const CMatrix& B = bc.B();
        CMatrix AB = A * B.adjoint();
        const bool re_neg = max_hermitian_eig(0.5 * (AB + AB.adjoint())) <= tol;
        const bool im_neg = max_hermitian_eig((AB - AB.adjoint()) / cplx(0.0, 2.0)) <= tol;
        bool contract = true, minus_contract = true;
        for (double s : {0.5, 1.0, 3.0}) {
            contract = contract && spectral_norm(direct_smatrix(A, B, cplx(0.0, s))) <= 1.0 + tol;
            minus_contract = minus_contract && spectral_norm(direct_smatrix(A, B, cplx(-s, 0.0))) <= 1.0 + tol;
        }
        CMatrix PM = CMatrix::Identity(2 * m, 2 * m) - bc.complement_projector();
        CMatrix ReQ = CMatrix::Zero(2 * m, 2 * m);
        ReQ.topRightCorner(m, m) = 0.5 * CMatrix::Identity(m, m);
        ReQ.bottomLeftCorner(m, m) = 0.5 * CMatrix::Identity(m, m);
        const bool form_pos = -max_hermitian_eig(-(PM * ReQ * PM)) >= -tol;
        o.require(re_neg == contract, "Re(AB*) <= 0 disagrees with ||S(i kappa)|| <= 1");
        o.require(re_neg == form_pos, "Re(AB*) <= 0 disagrees with P_M Re Q P_M >= 0");
        o.require(im_neg == minus_contract, "Im(AB*) <= 0 disagrees with ||S(-k)|| <= 1");

        auto rep = classify_operator(bc);
        o.require(rep.re_ab_neg_semidef == re_neg && rep.im_ab_neg_semidef == im_neg,
                  "classify_operator disagrees with the direct computation");
        re_true += re_neg;
        im_true += im_neg;
    }
    o.require(re_true > 20 && re_true < 180 && im_true > 20, "random pairs do not cover both sides");
    if (o.ok)
        o.detail << "200 pairs agree (" << re_true << " accretive, " << im_true << " with Im(AB*) <= 0)";
}

void criterion4(Outcome& o)
{
    const double h = 1e-3;
    const cplx k(0.0, 1.0);
    std::mt19937_64 rng(404);
    double worst = 0.0;
    const VertexSpec kinds[] = {VertexSpec::dirichlet(), VertexSpec::delta(0.7), VertexSpec::standard()};
    for (const MetricGraph& g : {fixtures::star(3), fixtures::line_graph(1.0)}) {
        for (const auto& spec : kinds) {
            auto bc = fixtures::same_everywhere(g, spec);
            GreenKernel G(g, bc, k);
            FdOperator op(g, bc, h, 12.0);
            FdResolvent fd(op, k);
            std::uniform_int_distribution<std::size_t> pe(0, g.num_edges() - 1);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int p = 0; p < 20; ++p) {
                std::size_t j = pe(rng), jp = pe(rng);
                auto node = [&](std::size_t e) {
                    const double span = g.is_external(e) ? 3.0 : g.length(e);
                    auto n = std::max<std::size_t>(1, op.nearest(e, u(rng) * span));
                    return op.step(e) * double(std::min(n, op.intervals(e) - (g.is_external(e) ? 0 : 1)));
                };
                double x = node(j), y = node(jp);
                cplx exact = G(j, x, jp, y);
                double err = std::abs(fd.green(j, x, jp, y) - exact);
                o.require(err <= 1e-3 * std::abs(exact) + 1e-12, "FD kernel differs from the closed form");
                if (std::abs(exact) > 0.0)
                    worst = std::max(worst, err / std::abs(exact));
            }
        }
    }

    // Degree-two standard vertices: the line graph is the free line.
    const double a = 1.7, kappa = 1.3;
    auto g = fixtures::line_graph(a);
    GreenKernel G(g, fixtures::same_everywhere(g, VertexSpec::standard()), cplx(0.0, kappa));
    auto X = [a](std::size_t j, double x) { return j == 0 ? -x : (j == 2 ? x : a + x); };
    std::uniform_real_distribution<double> ud(0.0, a);
    std::uniform_int_distribution<int> ed(0, 2);
    double line = 0.0;
    for (int t = 0; t < 50; ++t) {
        std::size_t j = ed(rng), jp = ed(rng);
        double x = ud(rng), y = ud(rng);
        cplx free = std::exp(-kappa * std::abs(X(j, x) - X(jp, y))) / (2.0 * kappa);
        line = std::max(line, std::abs(G(j, x, jp, y) - free));
    }
    o.require(line <= 1e-10, "degree-two standard vertices are visible");
    if (o.ok)
        o.detail << "max relative FD error " << worst << " on 120 pairs, free-line deviation " << line;
}

VertexSpec sign_definite(std::mt19937_64& rng, std::size_t deg)
{
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> mag(0.5, 2.0), gam(-2.0, 2.0);
    const double sign = rng() % 2 ? 1.0 : -1.0;
    CVector gv(static_cast<Eigen::Index>(deg));
    for (Eigen::Index i = 0; i < gv.size(); ++i)
        gv(i) = sign * mag(rng);
    switch (kind(rng)) {
    case 0:
        return VertexSpec::delta(gam(rng));
    case 1:
        return VertexSpec::standard();
    case 2:
        return VertexSpec::generic(0, gv);
    default:
        return VertexSpec::generic(-1, gv);
    }
}

void criterion5(Outcome& o)
{
    std::mt19937_64 rng(505);
    double lowest = 1.0;
    int graphs = 0;
    while (graphs < 10) {
        auto g = fixtures::random_graph(rng, 2 + graphs % 3, graphs % 2, 1 + graphs % 2);
        std::map<std::string, VertexSpec> specs;
        for (std::size_t v = 0; v < g.num_vertices(); ++v)
            specs[g.vertex_id(v)] = sign_definite(rng, g.degree(v));
        auto bc = assemble_global(g, specs);
        for (const auto& f : continuity_forms(g, bc))
            o.require(positivity_class(f).cls != PositivityClass::NotPositive, "generator produced a non-positive form");
        for (double kappa : {5.0, 10.0, 20.0}) {
            GreenKernel G(g, bc, cplx(0.0, kappa));
            for (const auto& s : sample_kernel(g, G, 8)) {
                lowest = std::min(lowest, s.value.real());
                o.require(s.value.real() >= -1e-12, "negative kernel entry for sign-definite conditions");
            }
        }
        ++graphs;
    }

    auto s2 = fixtures::star(2);
    CVector g2(2);
    g2 << 1.0, -1.0;
    auto bad = fixtures::same_everywhere(s2, VertexSpec::generic(0, g2));
    double neg = 0.0;
    std::size_t wj = 0, wjp = 0;
    double wx = 0.0, wy = 0.0;
    for (double kappa : {5.0, 10.0, 20.0}) {
        GreenKernel G(s2, bad, cplx(0.0, kappa));
        for (const auto& s : sample_kernel(s2, G, 8))
            if (s.value.real() < neg) {
                neg = s.value.real();
                wj = s.j, wjp = s.jp, wx = s.x, wy = s.y;
            }
    }
    o.require(neg < -1e-6, "g = (1, -1) gives no negative kernel entry");
    if (o.ok)
        o.detail << "min entry " << lowest << " on 10 graphs x 3 kappa; g=(1,-1) witness r(" << wj << ":" << wx << ", "
                 << wjp << ":" << wy << ") = " << neg;
}

void criterion6(Outcome& o)
{
    auto s = fixtures::star(3);
    auto std_bc = fixtures::same_everywhere(s, VertexSpec::standard());
    double dev = 0.0;
    for (double kappa : {1.0, 2.0, 5.0})
        dev = std::max(dev, std::abs(feller_sup_norm(s, std_bc, kappa).value - 1.0 / (kappa * kappa)));
    o.require(dev <= 1e-10, "standard star sup norm is not 1/kappa^2");

    const double a = 1.5, kappa = 2.0;
    auto iv = fixtures::interval(a);
    auto dir = fixtures::same_everywhere(iv, VertexSpec::dirichlet());
    const double want = (1.0 - 1.0 / std::cosh(kappa * a / 2.0)) / (kappa * kappa);
    const double got = feller_sup_norm(iv, dir, kappa).value;
    o.require(std::abs(got - want) <= 1e-8, "Dirichlet edge sup norm is wrong");

    auto pos = fixtures::same_everywhere(s, VertexSpec::generic(0, CVector::Ones(3)));
    const double over = feller_sup_norm(s, pos, 1.0).value;
    o.require(over > 1.0 + 1e-3, "<g, h> > 0 does not exceed 1/kappa^2");
    if (o.ok)
        o.detail << "star deviation " << dev << ", Dirichlet edge " << got << " vs " << want << ", g=h gives " << over
                 << " > 1";
}

void criterion7(Outcome& o)
{
    const double a = 1.3;
    auto iv = fixtures::interval(a);
    auto dir = fixtures::same_everywhere(iv, VertexSpec::dirichlet());
    auto sine = GraphFunction::sample(iv, 1.0 / 128, 0.0, [&](std::size_t, double x) { return cplx(std::sin(pi * x / a)); });
    const double lambda = pi * pi / (a * a);
    auto ev = evolve_spectral(iv, dir, sine, 0.1);
    const double decay = std::exp(-lambda * 0.1);
    double err = 0.0;
    for (std::size_t n = 0; n < sine.edges[0].values.size(); ++n)
        err = std::max(err, std::abs(ev.psi.edges[0].values[n] - decay * sine.edges[0].values[n]));
    o.require(err / decay <= 1e-4, "spectral sine mode does not decay at the exact rate");
    auto fd = evolve_fd_oracle(iv, dir, sine, 0.1, 1e-3, 1e-3);
    const double rate = -std::log(fd.edges[0].at(a / 2).real()) / 0.1;
    o.require(std::abs(rate - lambda) <= 0.01 * lambda, "FD decay rate is off by more than 1%");

    int checks = 0;
    {
        auto s = fixtures::star(3);
        auto bc = fixtures::same_everywhere(s, VertexSpec::standard());
        auto rep = verify_semigroup_properties(s, bc, hat(s, 0, 0.6, 0.5, external_extent_for(1.0)), {0.01, 0.1, 1.0});
        o.require(rep.all_ok() && rep.checks.size() == 3, "standard star fails a semigroup property");
        for (const auto& c : rep.checks)
            o.require(c.positivity_tested && c.continuity_tested, "standard star skipped a property");
        checks += int(rep.checks.size());
    }
    auto f1 = fixtures::line_graph(1.0);
    {
        auto bc = assemble_global(f1, {{"v0", VertexSpec::delta(1.5)}, {"v1", VertexSpec::standard()}});
        auto rep = verify_semigroup_properties(f1, bc, hat(f1, 2, 0.5, 0.4, external_extent_for(1.0)), {0.01, 0.1, 1.0});
        o.require(rep.all_ok() && rep.accretive && rep.positive_class && rep.continuity_class,
                  "delta graph fails a semigroup property");
        checks += int(rep.checks.size());
    }

    double gap = 0.0;
    auto pair = fixtures::delta_pair();
    auto psi0 = hat(f1, 2, 0.5, 0.4, external_extent_for(1.0));
    for (double t : {0.01, 0.1, 1.0}) {
        auto spec = evolve_spectral(f1, pair, psi0, t);
        auto fdt = evolve_fd_oracle(f1, pair, psi0, t, 1e-3, std::min(1e-3, t / 10));
        gap = std::max(gap, compare(fdt, spec.psi));
    }
    o.require(gap <= 1e-3, "spectral and FD evolutions differ");

    auto tri = fixtures::triangle(1.0, 0.7, 1.6);
    auto tbc = fixtures::same_everywhere(tri, VertexSpec::standard());
    auto one = GraphFunction::sample(tri, 1.0 / 128, 0.0, [](std::size_t, double) { return cplx(1.0); });
    double drift = 0.0;
    for (double t : {0.01, 0.1, 1.0})
        drift = std::max(drift, evolve_spectral(tri, tbc, one, t).psi.max_abs_difference(one));
    o.require(drift <= 1e-8, "constants are not invariant");
    if (o.ok)
        o.detail << "decay rel err " << err / decay << ", FD rate " << rate << " vs " << lambda << ", " << checks
                 << " property checks, spectral vs FD " << gap << ", constant drift " << drift;
}

void criterion8(Outcome& o)
{
    std::mt19937_64 rng(808);
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        auto g = fixtures::random_graph(rng, 3 + trial % 3, 1 + trial % 2, 1 + trial % 2);
        auto bc = fixtures::random_local(rng, g);
        const double kappa = 1.5 * series_threshold(g, bc);
        GreenKernel G(g, bc, cplx(0.0, kappa));
        std::uniform_int_distribution<std::size_t> pe(0, g.num_edges() - 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int p = 0; p < 3; ++p) {
            std::size_t j = pe(rng), jp = pe(rng);
            double x = u(rng) * (g.is_external(j) ? 2.0 : g.length(j));
            double y = u(rng) * (g.is_external(jp) ? 2.0 : g.length(jp));
            for (double cut : {0.0, 2.0, 4.0}) {
                auto s = green_via_walks(g, bc, kappa, j, x, jp, y, cut);
                o.require(std::abs(s.value - G(j, x, jp, y)) <= s.tail_bound + 1e-14, "walk series exceeds its tail bound");
                ++checked;
            }
        }
    }

    const double a = 2.0, kappa = 2.0, x = 0.7, y = 1.3;
    auto iv = fixtures::interval(a);
    auto dir = fixtures::same_everywhere(iv, VertexSpec::dirichlet());
    const double exact = std::sinh(kappa * x) * std::sinh(kappa * (a - y)) / (kappa * std::sinh(kappa * a));
    const double dev = std::abs(green_via_walks(iv, dir, kappa, 0, x, 0, y, 6 * a).value - exact);
    o.require(dev <= 1e-10, "Dirichlet edge walk series is off");

    int found = 0, attempts = 0;
    while (found < 50 && attempts < 2000) {
        ++attempts;
        auto g = fixtures::random_graph(rng, 3 + attempts % 4, attempts % 3, 0);
        std::uniform_int_distribution<std::size_t> pe(0, g.num_edges() - 1);
        std::size_t j = pe(rng), jp = pe(rng);
        if (j == jp)
            continue;
        End s = rng() % 2 ? End::Initial : End::Terminal, sp = rng() % 2 ? End::Initial : End::Terminal;
        std::vector<Walk> walks;
        for (double cut = 2.0; walks.empty(); cut *= 2)
            walks = enumerate_walks(g, jp, sp, j, s, cut);
        const double shortest = walks.front().metric_len;
        for (const auto& w : walks) {
            if (w.metric_len > shortest + 1e-9 || w.reflectionless() || found >= 50)
                continue;
            ++found;
            auto c = reflectionless_companion(g, w);
            o.require(c.has_value() && c->walk.reflectionless(), "no reflectionless companion");
            if (!c)
                continue;
            double added = 0.0;
            if (c->relation == 1 || c->relation == 3)
                added += g.length(j);
            if (c->relation == 2 || c->relation == 3)
                added += g.length(jp);
            o.require(std::abs(w.metric_len - (c->walk.metric_len + added)) < 1e-12, "companion length mismatch");
        }
    }
    o.require(found == 50, "fewer than 50 companion samples");
    if (o.ok)
        o.detail << checked << " tail-bound checks, Dirichlet edge deviation " << dev << ", " << found
                 << " companions";
}

void criterion9(Outcome& o)
{
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(-1.0, 1.0), lk(-3.0, 3.0);
    double reach = 0.0, imag = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 5;
        const int alpha = t % 2 == 0 ? 0 : -1;
        CVector gv(n);
        for (int i = 0; i < n; ++i)
            gv(i) = alpha == -1 ? cplx(u(rng), u(rng)) : cplx(u(rng));
        if (alpha == 0 && gv.sum().real() > 0.0)
            gv = -gv;
        if (alpha == -1 && std::abs(gv.sum()) < 1e-3)
            gv(0) += 1.0;
        auto vc = make_vertex_conditions(VertexSpec::generic(alpha, gv), n);
        auto f = continuity_form(vc.A, vc.B);
        const double kappa = std::exp(lk(rng));
        o.require(substochastic_check(f, kappa).substochastic, "generator produced a form that is not substochastic");
        for (cplx ev : vertex_spectrum(f, kappa)) {
            reach = std::max(reach, std::abs(ev.real()));
            imag = std::max(imag, std::abs(ev.imag()));
        }
    }
    o.require(reach <= 1.0 + 1e-9 && imag <= 1e-9, "an eigenvalue of S(i kappa) leaves [-1, 1]");
    if (o.ok)
        o.detail << "100 forms, max |Re ev| " << reach << ", max |Im ev| " << imag;
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"delta pair with Re(AB*) not <= 0", criterion1},
        {"S-matrix identities", criterion2},
        {"accretivity and dissipativity criteria", criterion3},
        {"Green kernel vs finite differences", criterion4},
        {"resolvent positivity", criterion5},
        {"Feller bound", criterion6},
        {"semigroup checks", criterion7},
        {"walk series", criterion8},
        {"vertex spectrum in [-1, 1]", criterion9},
    };
    int failed = 0, n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail.str("");
            o.detail << "exception: " << e.what();
        }
        failed += !o.ok;
        std::printf("criterion %d %s: %s (%s)\n", n, o.ok ? "PASS" : "FAIL", name, o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
