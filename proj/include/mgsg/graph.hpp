#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgsg/linalg.hpp"

namespace mgsg {

struct InternalEdgeSpec {
    std::string id;
    std::string from;
    std::string to;
    double length = 0.0;
};

struct ExternalEdgeSpec {
    std::string id;
    std::string vertex;
};

struct GraphSpec {
    std::vector<std::string> vertices;
    std::vector<InternalEdgeSpec> internal_edges;
    std::vector<ExternalEdgeSpec> external_edges;
};

// Endpoint of an edge: Initial is x = 0, Terminal is x = a (internal edges only).
enum class End { Initial, Terminal };

inline End opposite(End e) { return e == End::Initial ? End::Terminal : End::Initial; }

// Per-vertex bookkeeping of the trace space K = E + I(-) + I(+).
struct KLayout {
    std::size_t dim = 0;
    std::vector<std::vector<std::size_t>> vertex_indices;  // L_v, ascending
    std::vector<std::size_t> owner;                        // K index -> vertex
    std::vector<std::size_t> local_position;               // position of a K index inside L_v

    std::size_t degree(std::size_t v) const { return vertex_indices[v].size(); }
    CVector h(std::size_t v) const { return CVector::Ones(static_cast<Eigen::Index>(degree(v))); }
};

// Edges are numbered j = 0..|E|-1 for external edges, then |E|..|E|+|I|-1 for internal ones.
class MetricGraph {
public:
    static MetricGraph build(const GraphSpec& spec);

    std::size_t num_vertices() const { return vertex_ids_.size(); }
    std::size_t num_external() const { return num_external_; }
    std::size_t num_internal() const { return lengths_.size() - num_external_; }
    std::size_t num_edges() const { return lengths_.size(); }
    std::size_t dim() const { return layout_.dim; }

    bool is_external(std::size_t j) const { return j < num_external_; }
    std::size_t internal_number(std::size_t j) const { return j - num_external_; }
    double length(std::size_t j) const { return lengths_[j]; }
    double min_internal_length() const;
    double max_internal_length() const;

    const std::string& vertex_id(std::size_t v) const { return vertex_ids_[v]; }
    const std::string& edge_id(std::size_t j) const { return edge_ids_[j]; }
    std::optional<std::size_t> find_vertex(const std::string& id) const;
    std::optional<std::size_t> find_edge(const std::string& id) const;

    std::size_t vertex_at(std::size_t j, End end) const;
    std::size_t k_index(std::size_t j, End end) const;
    // Edge and end owning a K index.
    std::size_t k_edge(std::size_t idx) const;
    End k_end(std::size_t idx) const;

    std::size_t degree(std::size_t v) const { return layout_.degree(v); }
    bool is_tadpole(std::size_t j) const;
    bool has_tadpoles() const;
    const KLayout& layout() const { return layout_; }
    const GraphSpec& spec() const { return spec_; }

private:
    GraphSpec spec_;
    std::size_t num_external_ = 0;
    std::vector<std::string> vertex_ids_;
    std::vector<std::string> edge_ids_;
    std::vector<double> lengths_;  // infinity for external edges
    std::vector<std::size_t> from_;
    std::vector<std::size_t> to_;  // equals from_ for external edges
    std::map<std::string, std::size_t> vertex_lookup_;
    std::map<std::string, std::size_t> edge_lookup_;
    KLayout layout_;
};

// Boundary values of a function on the graph. Missing entries raise MissingEndpointDatum.
struct EndpointData {
    std::optional<cplx> value0, deriv0;  // at x = 0
    std::optional<cplx> valueA, derivA;  // at x = a (internal edges only)
};

struct TraceVector {
    CVector values;  // psi
    CVector derivs;  // psi', with the sign flip at terminal ends
    CVector stacked() const;
};

TraceVector trace_vector(const MetricGraph& g, const std::vector<EndpointData>& data);

} // namespace mgsg
