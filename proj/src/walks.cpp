#include "mgsg/walks.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "mgsg/error.hpp"
#include "mgsg/resolvent.hpp"

namespace mgsg {

namespace {

std::size_t other_end(const MetricGraph& g, std::size_t idx)
{
    return g.k_index(g.k_edge(idx), opposite(g.k_end(idx)));
}

Walk walk_from_path(const MetricGraph& g, const std::vector<std::size_t>& path)
{
    const auto& owner = g.layout().owner;
    Walk w;
    w.k_path = path;
    w.comb_len = (path.size() - 2) / 2;
    w.edges.push_back(g.k_edge(path.front()));
    w.vertices.push_back(owner[path.front()]);
    for (std::size_t l = 0; l < w.comb_len; ++l) {
        const std::size_t q = path[1 + 2 * l], p = path[2 + 2 * l];
        w.edges.push_back(g.k_edge(q));
        w.vertices.push_back(owner[p]);
        w.metric_len += g.length(g.k_edge(q));
    }
    w.edges.push_back(g.k_edge(path.back()));
    for (std::size_t i = 0; i + 1 < path.size(); i += 2)
        w.transmitted.push_back(path[i] != path[i + 1]);
    return w;
}

void require_tadpole_free(const MetricGraph& g)
{
    if (g.has_tadpoles())
        throw Error(ErrorCode::TadpolePresent, "walk expansions need a graph without tadpoles");
}

void require_end(const MetricGraph& g, std::size_t j, End e)
{
    if (j >= g.num_edges())
        throw Error(ErrorCode::InvalidParams, "edge index out of range");
    if (g.is_external(j) && e != End::Initial)
        throw Error(ErrorCode::InvalidParams, "external edge '" + g.edge_id(j) + "' has a single end");
}

double abs_row_norm(const CMatrix& S)
{
    return S.cwiseAbs().rowwise().sum().maxCoeff();
}

std::vector<End> ends_of(const MetricGraph& g, std::size_t j)
{
    if (g.is_external(j))
        return {End::Initial};
    return {End::Initial, End::Terminal};
}

double distance_to(const MetricGraph& g, std::size_t j, End e, double x)
{
    return e == End::Initial ? x : g.length(j) - x;
}

} // namespace

bool Walk::reflectionless() const
{
    return std::all_of(transmitted.begin(), transmitted.end(), [](bool t) { return t; });
}

std::vector<Walk> enumerate_walks(const MetricGraph& g, std::size_t jp, End sigma_p, std::size_t j, End sigma, double l_max,
                                  std::size_t max_walks)
{
    require_tadpole_free(g);
    require_end(g, jp, sigma_p);
    require_end(g, j, sigma);
    if (!(l_max >= 0.0))
        throw Error(ErrorCode::InvalidParams, "length cutoff must be nonnegative");
    const auto& L = g.layout();
    const std::size_t start = g.k_index(jp, sigma_p), target = g.k_index(j, sigma);
    const double slack = 1e-12 * std::max(1.0, l_max);

    using Partial = std::pair<double, std::vector<std::size_t>>;
    auto later = [](const Partial& a, const Partial& b) { return a.first > b.first; };
    std::priority_queue<Partial, std::vector<Partial>, decltype(later)> open(later);
    open.push({0.0, {start}});
    std::size_t created = 1;
    std::vector<Walk> out;
    while (!open.empty()) {
        Partial cur = open.top();
        open.pop();
        const std::size_t v = L.owner[cur.second.back()];
        if (v == L.owner[target]) {
            auto path = cur.second;
            path.push_back(target);
            out.push_back(walk_from_path(g, path));
        }
        for (std::size_t q : L.vertex_indices[v]) {
            const std::size_t e = g.k_edge(q);
            if (g.is_external(e))
                continue;
            const double len = cur.first + g.length(e);
            if (len > l_max + slack)
                continue;
            if (++created > max_walks)
                throw Error(ErrorCode::CutoffTooLarge, "more than " + std::to_string(max_walks) + " partial walks below the cutoff");
            auto path = cur.second;
            path.push_back(q);
            path.push_back(other_end(g, q));
            open.push({len, std::move(path)});
        }
    }
    auto key = [&](const Walk& w) {
        std::vector<std::string> ids;
        for (auto e : w.edges)
            ids.push_back(g.edge_id(e));
        return std::make_tuple(std::llround(w.metric_len * 1e9), ids, w.k_path);
    };
    std::stable_sort(out.begin(), out.end(), [&](const Walk& a, const Walk& b) { return key(a) < key(b); });
    return out;
}

cplx walk_weight(const CMatrix& S, const Walk& w)
{
    cplx W = 1.0;
    for (std::size_t i = 0; i + 1 < w.k_path.size(); i += 2)
        W *= S(static_cast<Eigen::Index>(w.k_path[i + 1]), static_cast<Eigen::Index>(w.k_path[i]));
    return W;
}

cplx walk_weight(const MetricGraph& g, const std::vector<CMatrix>& vertex_S, const Walk& w)
{
    const auto& L = g.layout();
    cplx W = 1.0;
    for (std::size_t i = 0; i + 1 < w.k_path.size(); i += 2) {
        const std::size_t from = w.k_path[i], to = w.k_path[i + 1];
        const std::size_t v = L.owner[from];
        if (v >= vertex_S.size() || vertex_S[v].rows() != static_cast<Eigen::Index>(L.degree(v)) ||
            vertex_S[v].cols() != vertex_S[v].rows())
            throw Error(ErrorCode::MissingVertexMatrix, "no scattering matrix for vertex '" + g.vertex_id(v) + "'");
        W *= vertex_S[v](static_cast<Eigen::Index>(L.local_position[to]), static_cast<Eigen::Index>(L.local_position[from]));
    }
    return W;
}

std::vector<CMatrix> vertex_smatrices(const MetricGraph& g, const BoundaryConditions& bc, double kappa)
{
    std::vector<CMatrix> out;
    for (const auto& vc : decompose_local(g, bc))
        out.push_back(smatrix(vc.A, vc.B, cplx(0.0, kappa)));
    return out;
}

double series_ratio(const MetricGraph& g, const CMatrix& S, double kappa)
{
    if (g.num_internal() == 0)
        return 0.0;
    return abs_row_norm(S) * std::exp(-kappa * g.min_internal_length());
}

WalkSeries green_via_walks(const MetricGraph& g, const BoundaryConditions& bc, double kappa, std::size_t j, double x,
                           std::size_t jp, double y, double l_cut)
{
    require_tadpole_free(g);
    if (!(kappa > 0.0) || !(l_cut >= 0.0))
        throw Error(ErrorCode::InvalidParams, "kappa must be positive and the cutoff nonnegative");
    auto vs = vertex_smatrices(g, bc, kappa);
    const CMatrix S = smatrix(bc, cplx(0.0, kappa));
    WalkSeries out;
    out.q = series_ratio(g, S, kappa);
    if (out.q >= 1.0)
        throw Error(ErrorCode::SeriesDiverges, "q = " + std::to_string(out.q) + " at kappa = " + std::to_string(kappa));

    cplx sum = 0.0;
    for (End s : ends_of(g, j))
        for (End sp : ends_of(g, jp)) {
            const double outer = std::exp(-kappa * (distance_to(g, j, s, x) + distance_to(g, jp, sp, y)));
            for (const auto& w : enumerate_walks(g, jp, sp, j, s, l_cut)) {
                sum += outer * walk_weight(g, vs, w) * std::exp(-kappa * w.metric_len);
                ++out.walks_used;
            }
        }
    out.value = sum / (2.0 * kappa);
    if (j == jp)
        out.value += std::exp(-kappa * std::abs(x - y)) / (2.0 * kappa);
    if (g.num_internal() > 0) {
        const double n_min = std::floor(l_cut / g.max_internal_length()) + 1.0;
        out.tail_bound = abs_row_norm(S) * std::pow(out.q, n_min) / (kappa * (1.0 - out.q));
    }
    return out;
}

double series_threshold(const MetricGraph& g, const BoundaryConditions& bc)
{
    for (int n = -8; n <= 120; ++n) {
        const double kappa = std::pow(2.0, n / 4.0);
        try {
            if (series_ratio(g, smatrix(bc, cplx(0.0, kappa)), kappa) < 0.5)
                return kappa;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularAtK)
                throw;
        }
    }
    throw Error(ErrorCode::SeriesDiverges, "no kappa up to 2^30 with q < 1/2");
}

WjTerm wj_positivity_term(const MetricGraph& g, const std::vector<ContinuityForm>& forms, double kappa, std::size_t j,
                          double x)
{
    require_tadpole_free(g);
    if (forms.size() != g.num_vertices())
        throw Error(ErrorCode::DimensionMismatch, "one form per vertex expected");
    std::vector<VertexConditions> per_vertex;
    for (std::size_t v = 0; v < forms.size(); ++v) {
        auto vc = form_matrices(forms[v]);
        vc.vertex = g.vertex_id(v);
        per_vertex.push_back(vc);
    }
    const auto bc = assemble_global(g, per_vertex);
    GreenKernel G(g, bc, cplx(0.0, kappa));
    const CMatrix& S = G.S();
    const double q = series_ratio(g, S, kappa);
    if (q >= 1.0)
        throw Error(ErrorCode::SeriesDiverges, "q = " + std::to_string(q) + " at kappa = " + std::to_string(kappa));

    const auto m = static_cast<Eigen::Index>(g.dim());
    const CVector h = CVector::Ones(m);
    const CVector Sh = S * h;
    CMatrix v;
    if (!checked_solve(CMatrix::Identity(m, m) - S * G.T(), CMatrix(h - Sh), v))
        throw Error(ErrorCode::SeriesDiverges, "I - S T is singular");
    const cplx val = (G.phi_tilde(j, x).transpose() * v.col(0)).value();

    WjTerm out;
    out.value = val.real();
    out.imag = val.imag();
    for (const auto& Lv : g.layout().vertex_indices) {
        bool all_less = true, all_equal = true;
        for (auto idx : Lv) {
            const cplx d = Sh(static_cast<Eigen::Index>(idx)) - 1.0;
            all_equal = all_equal && std::abs(d) < 1e-9;
            all_less = all_less && d.real() < -1e-9 && std::abs(d.imag()) < 1e-9;
        }
        out.vertex_class.push_back(all_equal ? 1 : (all_less ? 0 : -1));
    }
    return out;
}

std::optional<Companion> reflectionless_companion(const MetricGraph& g, const Walk& w)
{
    if (w.trivial())
        return std::nullopt;
    const auto& p = w.k_path;
    const std::size_t n = p.size();
    // (1): ..., q_n = (j, other end), p_n = k, k.  (2): k', q_1 = k', p_1 = (j', other end), ...
    const bool tail = n >= 4 && p[n - 1] == p[n - 2] && p[n - 3] == other_end(g, p[n - 1]);
    const bool head = n >= 4 && p[0] == p[1] && p[2] == other_end(g, p[0]);
    auto candidate = [&](int rel, std::size_t from, std::size_t to) -> std::optional<Companion> {
        if (to < from + 2)
            return std::nullopt;
        Walk c = walk_from_path(g, std::vector<std::size_t>(p.begin() + from, p.begin() + to));
        if (!c.reflectionless())
            return std::nullopt;
        return Companion{rel, c};
    };
    std::optional<Companion> out;
    if (tail)
        out = candidate(1, 0, n - 2);
    if (!out && head)
        out = candidate(2, 2, n);
    if (!out && head && tail && n >= 6)
        out = candidate(3, 2, n - 2);
    return out;
}

} // namespace mgsg
