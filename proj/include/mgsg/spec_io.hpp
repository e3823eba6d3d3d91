#pragma once

#include <map>
#include <string>

#include "mgsg/boundary.hpp"
#include "mgsg/graph.hpp"

namespace mgsg {

// Graph plus conditions, as read from one input file.
struct Problem {
    MetricGraph graph;
    BoundaryConditions bc;
    bool global = false;                          // conditions given as one (A, B) pair
    std::map<std::string, VertexSpec> per_vertex; // empty when global
};

// Throws ParseError (unreadable file, invalid JSON) or SchemaError naming the offending
// field, plus the graph and condition construction errors.
Problem parse_spec_text(const std::string& text);
Problem parse_spec_file(const std::string& path);

std::string read_text_file(const std::string& path);

} // namespace mgsg
