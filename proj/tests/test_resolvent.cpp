#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mgsg/error.hpp"
#include "mgsg/fd.hpp"
#include "mgsg/resolvent.hpp"

using namespace mgsg;

namespace {

const double pi = 3.14159265358979323846;

ErrorCode error_code(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::UnknownCommand;
}

BoundaryConditions standard_everywhere(const MetricGraph& g)
{
    std::map<std::string, VertexSpec> specs;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        specs[g.vertex_id(v)] = VertexSpec::standard();
    return assemble_global(g, specs);
}

} // namespace

TEST_CASE("Green kernel closed values")
{
    auto hl = fixtures::half_line();
    BoundaryConditions dir(CMatrix::Identity(1, 1), CMatrix::Zero(1, 1));
    GreenKernel G(hl, dir, cplx(0.0, 1.0));
    CHECK(std::abs(G(0, 1.0, 0, 1.0) - (1.0 - std::exp(-2.0)) / 2.0) < 1e-14);

    auto f1 = fixtures::line_graph();
    GreenKernel Gs(f1, standard_everywhere(f1), cplx(0.0, 1.0));
    CHECK(std::abs(Gs(1, 0.3, 0, 0.3) - std::exp(-1.6) / 2.0) < 1e-14);
}

TEST_CASE("degree-two standard vertices are invisible")
{
    auto g = fixtures::line_graph(1.7);
    const double kappa = 1.3;
    GreenKernel G(g, standard_everywhere(g), cplx(0.0, kappa));
    // Line coordinate: e1 -> -x, i -> x, e2 -> a + x.
    auto X = [](std::size_t j, double x) { return j == 0 ? -x : (j == 2 ? x : 1.7 + x); };
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ud(0.0, 1.7);
    std::uniform_int_distribution<int> ed(0, 2);
    for (int t = 0; t < 50; ++t) {
        std::size_t j = ed(rng), jp = ed(rng);
        double x = ud(rng), y = ud(rng);
        cplx free = std::exp(-kappa * std::abs(X(j, x) - X(jp, y))) / (2.0 * kappa);
        CHECK(std::abs(G(j, x, jp, y) - free) < 1e-12);
    }
}

TEST_CASE("kernel symmetry for self-adjoint conditions")
{
    auto g = fixtures::line_graph(0.8);
    auto bc = fixtures::delta_pair();
    GreenKernel G(g, bc, cplx(0.3, 2.0));
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t jp = 0; jp < 3; ++jp)
            CHECK(std::abs(G(j, 0.21, jp, 0.57) - G(jp, 0.57, j, 0.21)) < 1e-13);
}

TEST_CASE("finite-difference oracle agrees with the closed form")
{
    auto g = fixtures::line_graph(1.0);
    auto bc = assemble_global(g, {{"v0", VertexSpec::delta(1.0)}, {"v1", VertexSpec::dirichlet()}});
    const cplx k(0.0, 1.5);
    GreenKernel G(g, bc, k);
    FdOperator op(g, bc, 4e-3, 20.0);
    FdResolvent fd(op, k);
    const double pts[][4] = {{0, 0.4, 0, 1.2}, {2, 0.3, 0, 0.5}, {1, 0.7, 2, 0.25}, {2, 0.6, 2, 0.2}};
    for (const auto& p : pts) {
        auto j = static_cast<std::size_t>(p[0]), jp = static_cast<std::size_t>(p[2]);
        double x = op.step(j) * double(op.nearest(j, p[1]));
        double y = op.step(jp) * double(op.nearest(jp, p[3]));
        cplx exact = G(j, x, jp, y);
        CHECK(std::abs(fd.green(j, x, jp, y) - exact) <= 1e-3 * std::abs(exact));
    }
}

TEST_CASE("secular determinant scan")
{
    auto hl = fixtures::half_line();
    BoundaryConditions robin(CMatrix::Identity(1, 1), CMatrix::Identity(1, 1));
    auto roots = eigenvalue_scan(hl, robin, 0.0, 10.0);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0] - 1.0) < 1e-9);

    CHECK(eigenvalue_scan(fixtures::line_graph(1.0), fixtures::delta_pair(), 0.0, 50.0).empty());
    CHECK(eigenvalue_scan(fixtures::line_graph(10.0), fixtures::delta_pair(), 0.0, 50.0).size() == 1);
    CHECK(error_code([&] { eigenvalue_scan(hl, robin, 2.0, 1.0); }) == ErrorCode::EmptyRange);

    auto f1 = fixtures::line_graph(1.0);
    CMatrix Z = secular_matrix(f1, fixtures::delta_pair(), 1.0);
    CMatrix Zb = secular_matrix(f1, fixtures::delta_pair(), 1.0, true);
    CHECK(std::abs(Z.determinant() * std::exp(-1.0) - Zb.determinant()) < 1e-12);
}

TEST_CASE("resolvent application")
{
    const double kappa = 1.5;
    SUBCASE("constant on a standard star")
    {
        auto s = fixtures::star(3);
        auto phi = GraphFunction::sample(s, 1.0 / 512, 40.0 / kappa, [](std::size_t, double) { return cplx(1.0); });
        auto r = resolvent_apply(s, standard_everywhere(s), cplx(0.0, kappa), phi);
        CHECK(r.psi.edges[0].values.size() == phi.edges[0].values.size());
        for (const auto& e : r.psi.edges)
            for (auto v : e.values)
                CHECK(std::abs(v - 1.0 / (kappa * kappa)) < 1e-10);
    }
    SUBCASE("sine on a Dirichlet interval")
    {
        const double a = 2.0;
        auto g = fixtures::interval(a);
        auto bc = assemble_global(g, {{"v0", VertexSpec::dirichlet()}, {"v1", VertexSpec::dirichlet()}});
        auto phi = GraphFunction::sample(g, 1.0 / 512, 1.0, [a](std::size_t, double x) { return cplx(std::sin(pi * x / a)); });
        auto r = resolvent_apply(g, bc, cplx(0.0, kappa), phi);
        const double den = (pi / a) * (pi / a) + kappa * kappa;
        const auto& e = r.psi.edges[0];
        for (std::size_t n = 0; n < e.values.size(); ++n)
            CHECK(std::abs(e.values[n] - std::sin(pi * e.x(n) / a) / den) < 1e-6);
    }
    SUBCASE("boundary conditions hold for the output")
    {
        auto g = fixtures::line_graph(1.3);
        auto bc = assemble_global(g, {{"v0", VertexSpec::delta(cplx(0.5, 0.2))}, {"v1", VertexSpec::generic(0, CVector::Constant(2, -0.7))}});
        auto phi = GraphFunction::sample(g, 1.0 / 256, 30.0, [](std::size_t j, double x) {
            return cplx(std::exp(-x) * (1.0 + j), 0.3 * std::cos(x));
        });
        auto r = resolvent_apply(g, bc, cplx(0.2, 1.1), phi);
        std::vector<EndpointData> d(3);
        for (std::size_t j = 0; j < 3; ++j) {
            d[j].value0 = r.psi.edges[j].values.front();
            d[j].deriv0 = r.dpsi.edges[j].values.front();
            d[j].valueA = r.psi.edges[j].values.back();
            d[j].derivA = r.dpsi.edges[j].values.back();
        }
        auto tv = trace_vector(g, d);
        CHECK((bc.A() * tv.values + bc.B() * tv.derivs).norm() < 1e-12);

        // -psi'' - k^2 psi = phi in the interior, checked with second differences.
        const cplx k(0.2, 1.1);
        const auto& e = r.psi.edges[2];
        for (std::size_t n = 10; n + 10 < e.values.size(); n += 37) {
            cplx d2 = (e.values[n - 1] - 2.0 * e.values[n] + e.values[n + 1]) / (e.step * e.step);
            CHECK(std::abs(-d2 - k * k * e.values[n] - phi.edges[2].values[n]) < 1e-4);
        }
    }
}

TEST_CASE("Feller sup norm")
{
    auto s = fixtures::star(3);
    for (double kappa : {1.0, 2.0, 5.0})
        CHECK(std::abs(feller_sup_norm(s, standard_everywhere(s), kappa).value - 1.0 / (kappa * kappa)) < 1e-10);

    const double a = 1.5, kappa = 2.0;
    auto g = fixtures::interval(a);
    auto dir = assemble_global(g, {{"v0", VertexSpec::dirichlet()}, {"v1", VertexSpec::dirichlet()}});
    CHECK(std::abs(feller_sup_norm(g, dir, kappa).value - (1.0 - 1.0 / std::cosh(kappa * a / 2.0)) / (kappa * kappa)) < 1e-8);

    auto pos = assemble_global(s, {{"v", VertexSpec::generic(0, CVector::Ones(3))}});
    CHECK(feller_sup_norm(s, pos, 1.0).value > 1.0 + 1e-3);

    auto s2 = fixtures::star(2);
    CVector g2(2);
    g2 << 1.0, -1.0;
    auto bad = assemble_global(s2, {{"v", VertexSpec::generic(0, g2)}});
    CHECK(error_code([&] { feller_sup_norm(s2, bad, 1.0); }) == ErrorCode::NonpositiveKernel);
}
