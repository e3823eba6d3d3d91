#pragma once

#include <functional>
#include <vector>

#include "mgsg/graph.hpp"
#include "mgsg/linalg.hpp"

namespace mgsg {

// Uniform samples x_n = n * step, n = 0..N, on one edge. External edges are
// sampled on a truncated range [0, step * N].
struct EdgeSamples {
    double step = 0.0;
    std::vector<cplx> values;

    std::size_t intervals() const { return values.empty() ? 0 : values.size() - 1; }
    double extent() const { return step * double(intervals()); }
    double x(std::size_t n) const { return step * double(n); }
    cplx at(double x) const;  // linear interpolation, zero beyond the sampled range
};

struct GraphFunction {
    std::vector<EdgeSamples> edges;

    // Steps are adjusted per edge so that the edge length (or external_extent) is a whole number of steps.
    static GraphFunction sample(const MetricGraph& g, double step, double external_extent,
                                const std::function<cplx(std::size_t edge, double x)>& f);
    static GraphFunction zeros_like(const GraphFunction& other);

    GraphFunction resampled(const MetricGraph& g, double step, double external_extent) const;

    // Norms and inner products of the piecewise-linear interpolant.
    double l2_norm() const;
    double sup_norm() const;
    double min_real() const;
    double max_abs_imag() const;
    cplx inner(const GraphFunction& other) const;  // <this, other>, antilinear in this

    double max_abs_difference(const GraphFunction& other) const;
};

// Largest jump of the vertex values across edges meeting at vertices of degree >= 2.
double continuity_mismatch(const MetricGraph& g, const GraphFunction& f);

} // namespace mgsg
