#pragma once

#include <optional>
#include <vector>

#include "mgsg/boundary.hpp"
#include "mgsg/graph.hpp"

namespace mgsg {

// A walk from edge j' to edge j. Stored in traversal order:
//   edges    = j', j_1, ..., j_n, j
//   vertices = v_0, ..., v_n
//   k_path   = k', q_1, p_1, ..., q_n, p_n, k
// where k' is the end of j' that is left, q_l / p_l are the entry / exit ends of j_l and
// k is the end of j that is entered. A trivial walk has k_path = k', k.
struct Walk {
    std::vector<std::size_t> edges;
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> k_path;
    std::vector<bool> transmitted;  // per entry of `vertices`
    std::size_t comb_len = 0;
    double metric_len = 0.0;

    bool trivial() const { return comb_len == 0; }
    bool reflectionless() const;
};

// End::Initial plays the role of the minus sign, End::Terminal of the plus sign.
// External edges only have End::Initial. Walks with metric length <= l_max, sorted by
// metric length, then by the edge id sequence. Throws TadpolePresent or CutoffTooLarge.
std::vector<Walk> enumerate_walks(const MetricGraph& g, std::size_t jp, End sigma_p, std::size_t j, End sigma, double l_max,
                                  std::size_t max_walks = 200000);

// Product of scattering entries along the walk, taken from a global S on K.
cplx walk_weight(const CMatrix& S, const Walk& w);
// Same, from per-vertex matrices indexed like KLayout::vertex_indices. Throws MissingVertexMatrix.
cplx walk_weight(const MetricGraph& g, const std::vector<CMatrix>& vertex_S, const Walk& w);
// S(i kappa; M_v) for every vertex. Throws NotLocal.
std::vector<CMatrix> vertex_smatrices(const MetricGraph& g, const BoundaryConditions& bc, double kappa);

struct WalkSeries {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;
    double q = 0.0;  // ||S||_abs * exp(-kappa * min a)
    std::size_t walks_used = 0;
};

// Contraction ratio of the series; 0 without internal edges.
double series_ratio(const MetricGraph& g, const CMatrix& S, double kappa);

// Green's function at k = i kappa from the walks of metric length <= l_cut.
// Throws TadpolePresent, NotLocal, SeriesDiverges (q >= 1).
WalkSeries green_via_walks(const MetricGraph& g, const BoundaryConditions& bc, double kappa, std::size_t j, double x,
                           std::size_t jp, double y, double l_cut);

// Smallest kappa on the grid 2^(n/4) (n >= -8) with q < 1/2.
double series_threshold(const MetricGraph& g, const BoundaryConditions& bc);

struct WjTerm {
    double value = 0.0;
    double imag = 0.0;
    // Per vertex: 0 for S h_v < h_v entrywise, 1 for S h_v = h_v, -1 if neither (tolerance 1e-9).
    std::vector<int> vertex_class;
};

// w_j(x; kappa) = [Phi R+^{-1} (I - S T)^{-1} (I - S) h]_j. Throws SeriesDiverges when q >= 1.
WjTerm wj_positivity_term(const MetricGraph& g, const std::vector<ContinuityForm>& forms, double kappa, std::size_t j,
                          double x);

struct Companion {
    int relation = 0;  // 1, 2 or 3
    Walk walk;
};

// For a walk from j' to j, a reflectionless walk w' with
//   (1) w = (j, end, w'), (2) w = (w', end, j') or (3) w = (j, end, w', end, j'),
// entering / leaving through the opposite ends.
std::optional<Companion> reflectionless_companion(const MetricGraph& g, const Walk& w);

} // namespace mgsg
