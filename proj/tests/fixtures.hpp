#pragma once

#include <map>
#include <random>
#include <set>
#include <string>

#include "mgsg/boundary.hpp"
#include "mgsg/graph.hpp"

namespace fixtures {

using mgsg::cplx;
using mgsg::CMatrix;
using mgsg::CVector;

// e1 at v0, e2 at v1, internal edge i from v0 to v1.
inline mgsg::MetricGraph line_graph(double a = 1.0)
{
    return mgsg::MetricGraph::build({{"v0", "v1"}, {{"i", "v0", "v1", a}}, {{"e1", "v0"}, {"e2", "v1"}}});
}

// n half-lines at one vertex.
inline mgsg::MetricGraph star(int n)
{
    mgsg::GraphSpec s;
    s.vertices = {"v"};
    for (int j = 0; j < n; ++j)
        s.external_edges.push_back({"e" + std::to_string(j + 1), "v"});
    return mgsg::MetricGraph::build(s);
}

inline mgsg::MetricGraph half_line()
{
    return star(1);
}

inline mgsg::MetricGraph interval(double a)
{
    return mgsg::MetricGraph::build({{"v0", "v1"}, {{"i", "v0", "v1", a}}, {}});
}

// Global pair for the line graph: delta(+1) at v0, delta(-1/2) at v1.
inline mgsg::BoundaryConditions delta_pair()
{
    CMatrix A = CMatrix::Zero(4, 4), B = CMatrix::Zero(4, 4);
    A(0, 0) = 1.0;
    A(0, 2) = -1.0;
    A(1, 1) = 1.0;
    A(1, 3) = -1.0;
    A(2, 0) = -1.0;
    A(3, 1) = 0.5;
    B(2, 0) = 1.0;
    B(2, 2) = 1.0;
    B(3, 1) = 1.0;
    B(3, 3) = 1.0;
    return mgsg::BoundaryConditions(A, B);
}

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c)
{
    std::normal_distribution<double> nd;
    CMatrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            M(i, j) = cplx(nd(rng), nd(rng));
    return M;
}

inline CVector random_vector(std::mt19937_64& rng, Eigen::Index n)
{
    return random_matrix(rng, n, 1);
}

// Random m x m pair whose scattering matrix at k0 equals a prescribed S0.
// norm_kind: 0 -> ||S0|| = 0.8, 1 -> unitary, 2 -> ||S0|| = 1.25.
inline mgsg::BoundaryConditions pair_with_smatrix(std::mt19937_64& rng, Eigen::Index m, int norm_kind, cplx k0)
{
    CMatrix S0 = random_matrix(rng, m, m);
    if (norm_kind == 1) {
        Eigen::HouseholderQR<CMatrix> qr(S0);
        S0 = qr.householderQ();
    } else {
        S0 *= (norm_kind == 0 ? 0.8 : 1.25) / mgsg::spectral_norm(S0);
    }
    CMatrix X = random_matrix(rng, m, m) + 2.0 * CMatrix::Identity(m, m);
    CMatrix Id = CMatrix::Identity(m, m);
    // A + i k0 B = X and A - i k0 B = -X S0.
    CMatrix A = X * (Id - S0) / 2.0;
    CMatrix B = X * (Id + S0) / (2.0 * mgsg::I_unit * k0);
    return mgsg::BoundaryConditions(A, B);
}

inline mgsg::BoundaryConditions same_everywhere(const mgsg::MetricGraph& g, const mgsg::VertexSpec& spec)
{
    std::map<std::string, mgsg::VertexSpec> specs;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        specs[g.vertex_id(v)] = spec;
    return mgsg::assemble_global(g, specs);
}

// Three internal edges forming a cycle v0 -> v1 -> v2 -> v0.
inline mgsg::MetricGraph triangle(double a, double b, double c)
{
    return mgsg::MetricGraph::build(
        {{"v0", "v1", "v2"}, {{"i1", "v0", "v1", a}, {"i2", "v1", "v2", b}, {"i3", "v2", "v0", c}}, {}});
}

// Connected graph without tadpoles or parallel edges, generic lengths in [0.5, 2].
inline mgsg::MetricGraph random_graph(std::mt19937_64& rng, int n_vertices, int extra_edges, int n_external)
{
    std::uniform_real_distribution<double> len(0.5, 2.0);
    mgsg::GraphSpec s;
    for (int v = 0; v < n_vertices; ++v)
        s.vertices.push_back("v" + std::to_string(v));
    std::set<std::pair<int, int>> used;
    auto add = [&](int a, int b) {
        if (a == b || used.count({std::min(a, b), std::max(a, b)}))
            return;
        used.insert({std::min(a, b), std::max(a, b)});
        s.internal_edges.push_back({"i" + std::to_string(s.internal_edges.size()), s.vertices[a], s.vertices[b], len(rng)});
    };
    for (int v = 1; v < n_vertices; ++v)
        add(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
    std::uniform_int_distribution<int> pick(0, n_vertices - 1);
    for (int e = 0; e < extra_edges; ++e)
        add(pick(rng), pick(rng));
    for (int e = 0; e < n_external; ++e)
        s.external_edges.push_back({"e" + std::to_string(e), s.vertices[pick(rng)]});
    return mgsg::MetricGraph::build(s);
}

inline mgsg::BoundaryConditions random_local(std::mt19937_64& rng, const mgsg::MetricGraph& g)
{
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> u(-0.5, 2.0);
    std::map<std::string, mgsg::VertexSpec> specs;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        switch (kind(rng)) {
        case 0:
            specs[g.vertex_id(v)] = mgsg::VertexSpec::dirichlet();
            break;
        case 1:
            specs[g.vertex_id(v)] = mgsg::VertexSpec::delta(u(rng));
            break;
        case 2:
            specs[g.vertex_id(v)] = mgsg::VertexSpec::standard();
            break;
        default: {
            mgsg::CVector gv(static_cast<Eigen::Index>(g.degree(v)));
            for (Eigen::Index i = 0; i < gv.size(); ++i)
                gv(i) = u(rng);
            specs[g.vertex_id(v)] = mgsg::VertexSpec::generic(-1, gv);
        }
        }
    }
    return mgsg::assemble_global(g, specs);
}

} // namespace fixtures
