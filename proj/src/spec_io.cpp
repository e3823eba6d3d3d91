#include "mgsg/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mgsg/error.hpp"

namespace mgsg {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::SchemaError, where + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& where)
{
    if (!obj.is_object())
        schema(where, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end())
        schema(where, std::string("missing field '") + name + "'");
    return *it;
}

std::string string_field(const json& obj, const char* name, const std::string& where)
{
    const json& v = field(obj, name, where);
    if (!v.is_string())
        schema(where, std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

// [re, im]; a bare number is read as a real value.
cplx complex_value(const json& v, const std::string& where)
{
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    schema(where, "complex numbers are written as [re, im]");
}

CMatrix complex_matrix(const json& v, const std::string& where)
{
    if (!v.is_array() || v.empty())
        schema(where, "expected a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(v.size());
    if (!v[0].is_array())
        schema(where, "rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(v[0].size());
    CMatrix M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = v[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            schema(where, "row " + std::to_string(r) + " has the wrong length");
        for (Eigen::Index c = 0; c < cols; ++c)
            M(r, c) = complex_value(row[static_cast<std::size_t>(c)],
                                    where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return M;
}

GraphSpec graph_spec(const json& root)
{
    GraphSpec s;
    const json& vs = field(root, "vertices", "root");
    if (!vs.is_array())
        schema("vertices", "expected an array of strings");
    for (const auto& v : vs) {
        if (!v.is_string())
            schema("vertices", "vertex ids must be strings");
        s.vertices.push_back(v.get<std::string>());
    }
    if (root.contains("internal_edges")) {
        const json& es = root["internal_edges"];
        if (!es.is_array())
            schema("internal_edges", "expected an array");
        for (std::size_t n = 0; n < es.size(); ++n) {
            const json& e = es[n];
            std::string where = "internal_edges[" + std::to_string(n) + "]";
            const std::string id = string_field(e, "id", where);
            where = "internal edge '" + id + "'";
            InternalEdgeSpec ie{id, string_field(e, "from", where), string_field(e, "to", where), 0.0};
            const json& len = field(e, "length", where);
            if (!len.is_number())
                schema(where, "field 'length' must be a number");
            ie.length = len.get<double>();
            s.internal_edges.push_back(ie);
        }
    }
    if (root.contains("external_edges")) {
        const json& es = root["external_edges"];
        if (!es.is_array())
            schema("external_edges", "expected an array");
        for (std::size_t n = 0; n < es.size(); ++n) {
            const json& e = es[n];
            std::string where = "external_edges[" + std::to_string(n) + "]";
            const std::string id = string_field(e, "id", where);
            s.external_edges.push_back({id, string_field(e, "vertex", "external edge '" + id + "'")});
        }
    }
    return s;
}

VertexSpec vertex_spec(const json& v, const std::string& where)
{
    const std::string kind = string_field(v, "kind", where);
    if (kind == "dirichlet")
        return VertexSpec::dirichlet();
    if (kind == "standard")
        return VertexSpec::standard();
    if (kind == "delta")
        return VertexSpec::delta(complex_value(field(v, "gamma", where), where + ".gamma"));
    if (kind == "generic") {
        const json& a = field(v, "alpha", where);
        if (!a.is_number_integer() || (a.get<int>() != 0 && a.get<int>() != -1))
            schema(where, "field 'alpha' must be 0 or -1");
        const json& g = field(v, "g", where);
        if (!g.is_array() || g.empty())
            schema(where, "field 'g' must be a nonempty array");
        CVector gv(static_cast<Eigen::Index>(g.size()));
        for (std::size_t i = 0; i < g.size(); ++i)
            gv(static_cast<Eigen::Index>(i)) = complex_value(g[i], where + ".g[" + std::to_string(i) + "]");
        return VertexSpec::generic(a.get<int>(), gv);
    }
    schema(where, "unknown kind '" + kind + "'");
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Problem parse_spec_text(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!root.is_object())
        schema("root", "expected an object");

    Problem p;
    p.graph = MetricGraph::build(graph_spec(root));
    const json& c = field(root, "conditions", "root");
    const std::string type = string_field(c, "type", "conditions");
    if (type == "global") {
        p.global = true;
        p.bc = BoundaryConditions(complex_matrix(field(c, "A", "conditions"), "conditions.A"),
                                  complex_matrix(field(c, "B", "conditions"), "conditions.B"));
        if (p.bc.dim() != static_cast<Eigen::Index>(p.graph.dim()))
            throw Error(ErrorCode::DimensionMismatch, "conditions have " + std::to_string(p.bc.dim()) +
                                                          " rows, the trace space has dimension " +
                                                          std::to_string(p.graph.dim()));
    } else if (type == "per_vertex") {
        for (auto it = c.begin(); it != c.end(); ++it) {
            if (it.key() == "type")
                continue;
            if (!p.graph.find_vertex(it.key()))
                schema("conditions", "unknown vertex '" + it.key() + "'");
            p.per_vertex[it.key()] = vertex_spec(it.value(), "conditions." + it.key());
        }
        p.bc = assemble_global(p.graph, p.per_vertex);
    } else {
        schema("conditions", "field 'type' must be 'global' or 'per_vertex'");
    }
    return p;
}

Problem parse_spec_file(const std::string& path)
{
    return parse_spec_text(read_text_file(path));
}

} // namespace mgsg
