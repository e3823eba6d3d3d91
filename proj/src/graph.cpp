#include "mgsg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mgsg/error.hpp"

namespace mgsg {

namespace {

std::size_t lookup_vertex(const std::map<std::string, std::size_t>& table, const std::string& vid,
                          const std::string& edge)
{
    auto it = table.find(vid);
    if (it == table.end())
        throw Error(ErrorCode::DanglingVertexReference, "edge '" + edge + "' references unknown vertex '" + vid + "'");
    return it->second;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v)
{
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}

} // namespace

MetricGraph MetricGraph::build(const GraphSpec& spec)
{
    MetricGraph g;
    g.spec_ = spec;
    for (const auto& v : spec.vertices) {
        if (!g.vertex_lookup_.emplace(v, g.vertex_ids_.size()).second)
            throw Error(ErrorCode::DuplicateId, "vertex '" + v + "' declared twice");
        g.vertex_ids_.push_back(v);
    }

    auto add_edge = [&g](const std::string& id) {
        if (!g.edge_lookup_.emplace(id, g.edge_ids_.size()).second)
            throw Error(ErrorCode::DuplicateId, "edge '" + id + "' declared twice");
        g.edge_ids_.push_back(id);
    };

    g.num_external_ = spec.external_edges.size();
    for (const auto& e : spec.external_edges) {
        add_edge(e.id);
        std::size_t v = lookup_vertex(g.vertex_lookup_, e.vertex, e.id);
        g.from_.push_back(v);
        g.to_.push_back(v);
        g.lengths_.push_back(std::numeric_limits<double>::infinity());
    }
    for (const auto& e : spec.internal_edges) {
        add_edge(e.id);
        if (!(e.length > 0.0) || !std::isfinite(e.length))
            throw Error(ErrorCode::NonpositiveLength, "edge '" + e.id + "' has length " + std::to_string(e.length));
        g.from_.push_back(lookup_vertex(g.vertex_lookup_, e.from, e.id));
        g.to_.push_back(lookup_vertex(g.vertex_lookup_, e.to, e.id));
        g.lengths_.push_back(e.length);
    }

    const std::size_t nE = g.num_external_;
    const std::size_t nI = spec.internal_edges.size();
    KLayout& L = g.layout_;
    L.dim = nE + 2 * nI;
    L.owner.assign(L.dim, 0);
    L.local_position.assign(L.dim, 0);
    L.vertex_indices.assign(g.vertex_ids_.size(), {});
    for (std::size_t idx = 0; idx < L.dim; ++idx) {
        std::size_t v = g.vertex_at(g.k_edge(idx), g.k_end(idx));
        L.owner[idx] = v;
        L.local_position[idx] = L.vertex_indices[v].size();
        L.vertex_indices[v].push_back(idx);
    }

    for (std::size_t v = 0; v < g.vertex_ids_.size(); ++v)
        if (L.vertex_indices[v].empty())
            throw Error(ErrorCode::ZeroDegreeVertex, "vertex '" + g.vertex_ids_[v] + "' has no incident edge");

    std::vector<std::size_t> parent(g.vertex_ids_.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t j = nE; j < g.num_edges(); ++j)
        parent[find_root(parent, g.from_[j])] = find_root(parent, g.to_[j]);
    for (std::size_t v = 1; v < parent.size(); ++v)
        if (find_root(parent, v) != find_root(parent, 0))
            throw Error(ErrorCode::DisconnectedGraph,
                        "vertex '" + g.vertex_ids_[v] + "' is not connected to '" + g.vertex_ids_[0] + "'");
    return g;
}

double MetricGraph::min_internal_length() const
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = num_external_; j < num_edges(); ++j)
        m = std::min(m, lengths_[j]);
    return m;
}

double MetricGraph::max_internal_length() const
{
    double m = 0.0;
    for (std::size_t j = num_external_; j < num_edges(); ++j)
        m = std::max(m, lengths_[j]);
    return m;
}

std::optional<std::size_t> MetricGraph::find_vertex(const std::string& id) const
{
    auto it = vertex_lookup_.find(id);
    if (it == vertex_lookup_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> MetricGraph::find_edge(const std::string& id) const
{
    auto it = edge_lookup_.find(id);
    if (it == edge_lookup_.end())
        return std::nullopt;
    return it->second;
}

std::size_t MetricGraph::vertex_at(std::size_t j, End end) const
{
    return end == End::Initial ? from_[j] : to_[j];
}

std::size_t MetricGraph::k_index(std::size_t j, End end) const
{
    if (is_external(j))
        return j;
    std::size_t i = internal_number(j);
    return end == End::Initial ? num_external_ + i : num_external_ + num_internal() + i;
}

std::size_t MetricGraph::k_edge(std::size_t idx) const
{
    if (idx < num_external_)
        return idx;
    std::size_t r = idx - num_external_;
    return num_external_ + (r < num_internal() ? r : r - num_internal());
}

End MetricGraph::k_end(std::size_t idx) const
{
    if (idx < num_external_ + num_internal())
        return End::Initial;
    return End::Terminal;
}

bool MetricGraph::is_tadpole(std::size_t j) const
{
    return !is_external(j) && from_[j] == to_[j];
}

bool MetricGraph::has_tadpoles() const
{
    for (std::size_t j = num_external_; j < num_edges(); ++j)
        if (is_tadpole(j))
            return true;
    return false;
}

CVector TraceVector::stacked() const
{
    CVector out(values.size() + derivs.size());
    out << values, derivs;
    return out;
}

TraceVector trace_vector(const MetricGraph& g, const std::vector<EndpointData>& data)
{
    if (data.size() != g.num_edges())
        throw Error(ErrorCode::DimensionMismatch, "expected endpoint data for every edge");
    const auto m = static_cast<Eigen::Index>(g.dim());
    TraceVector tv{CVector::Zero(m), CVector::Zero(m)};
    auto need = [&g](const std::optional<cplx>& v, std::size_t j, const char* what) {
        if (!v)
            throw Error(ErrorCode::MissingEndpointDatum, std::string(what) + " missing on edge '" + g.edge_id(j) + "'");
        return *v;
    };
    for (std::size_t j = 0; j < g.num_edges(); ++j) {
        auto i0 = static_cast<Eigen::Index>(g.k_index(j, End::Initial));
        tv.values(i0) = need(data[j].value0, j, "value at 0");
        tv.derivs(i0) = need(data[j].deriv0, j, "derivative at 0");
        if (!g.is_external(j)) {
            auto ia = static_cast<Eigen::Index>(g.k_index(j, End::Terminal));
            tv.values(ia) = need(data[j].valueA, j, "value at a");
            tv.derivs(ia) = -need(data[j].derivA, j, "derivative at a");
        }
    }
    return tv;
}

} // namespace mgsg
