#include "mgsg/graph_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgsg/error.hpp"

namespace mgsg {

cplx EdgeSamples::at(double x) const
{
    const std::size_t N = intervals();
    if (N == 0 || x < 0.0 || x > extent() * (1.0 + 1e-12))
        return 0.0;
    const double s = std::min(x / step, double(N));
    const auto n = std::min(static_cast<std::size_t>(s), N - 1);
    const double w = s - double(n);
    return (1.0 - w) * values[n] + w * values[n + 1];
}

GraphFunction GraphFunction::sample(const MetricGraph& g, double step, double external_extent,
                                    const std::function<cplx(std::size_t, double)>& f)
{
    if (!(step > 0.0))
        throw Error(ErrorCode::InvalidParams, "sampling step must be positive");
    GraphFunction out;
    out.edges.resize(g.num_edges());
    for (std::size_t j = 0; j < g.num_edges(); ++j) {
        const double len = g.is_external(j) ? external_extent : g.length(j);
        const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(len / step - 1e-9)));
        EdgeSamples& e = out.edges[j];
        e.step = len / double(n);
        e.values.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            e.values[i] = f(j, e.x(i));
    }
    return out;
}

GraphFunction GraphFunction::zeros_like(const GraphFunction& other)
{
    GraphFunction out = other;
    for (auto& e : out.edges)
        std::fill(e.values.begin(), e.values.end(), cplx(0.0));
    return out;
}

GraphFunction GraphFunction::resampled(const MetricGraph& g, double step, double external_extent) const
{
    return sample(g, step, external_extent, [this](std::size_t j, double x) { return edges[j].at(x); });
}

double GraphFunction::l2_norm() const
{
    return std::sqrt(std::max(0.0, inner(*this).real()));
}

double GraphFunction::sup_norm() const
{
    double m = 0.0;
    for (const auto& e : edges)
        for (auto v : e.values)
            m = std::max(m, std::abs(v));
    return m;
}

double GraphFunction::min_real() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : edges)
        for (auto v : e.values)
            m = std::min(m, v.real());
    return m;
}

double GraphFunction::max_abs_imag() const
{
    double m = 0.0;
    for (const auto& e : edges)
        for (auto v : e.values)
            m = std::max(m, std::abs(v.imag()));
    return m;
}

cplx GraphFunction::inner(const GraphFunction& other) const
{
    if (other.edges.size() != edges.size())
        throw Error(ErrorCode::DimensionMismatch, "graph functions live on different graphs");
    cplx s = 0.0;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const auto& a = edges[j];
        const auto& b = other.edges[j];
        if (a.values.size() != b.values.size())
            throw Error(ErrorCode::DimensionMismatch, "graph functions use different grids");
        // Exact integral of the product of two linear interpolants on each cell.
        for (std::size_t n = 0; n + 1 < a.values.size(); ++n) {
            cplx a0 = std::conj(a.values[n]), a1 = std::conj(a.values[n + 1]);
            cplx b0 = b.values[n], b1 = b.values[n + 1];
            s += a.step * (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1) / 6.0;
        }
    }
    return s;
}

double GraphFunction::max_abs_difference(const GraphFunction& other) const
{
    double m = 0.0;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const auto& a = edges[j].values;
        const auto& b = other.edges.at(j).values;
        if (a.size() != b.size())
            throw Error(ErrorCode::DimensionMismatch, "graph functions use different grids");
        for (std::size_t n = 0; n < a.size(); ++n)
            m = std::max(m, std::abs(a[n] - b[n]));
    }
    return m;
}

double continuity_mismatch(const MetricGraph& g, const GraphFunction& f)
{
    double worst = 0.0;
    const KLayout& L = g.layout();
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto& idx = L.vertex_indices[v];
        if (idx.size() < 2)
            continue;
        auto value = [&](std::size_t k) {
            const auto& e = f.edges[g.k_edge(k)];
            return g.k_end(k) == End::Initial ? e.values.front() : e.values.back();
        };
        const cplx ref = value(idx[0]);
        for (std::size_t p = 1; p < idx.size(); ++p)
            worst = std::max(worst, std::abs(value(idx[p]) - ref));
    }
    return worst;
}

} // namespace mgsg
