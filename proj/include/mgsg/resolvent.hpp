#pragma once

#include <vector>

#include "mgsg/boundary.hpp"
#include "mgsg/graph.hpp"
#include "mgsg/graph_function.hpp"

namespace mgsg {

// Closed-form Green's matrix of (-Delta - k^2)^{-1}, Im k > 0.
//   r(x,y) = r0(x,y) + (i/2k) Phi(x) R+^{-1} (I - S T)^{-1} S R+^{-1} Phi(y)^T
class GreenKernel {
public:
    // Throws SingularAtK (A + ikB singular) or NotInResolventSet (I - ST singular).
    GreenKernel(const MetricGraph& g, const BoundaryConditions& bc, cplx k);

    cplx operator()(std::size_t j, double x, std::size_t jp, double y) const;
    // The separable part only (r - r0).
    cplx scattered(std::size_t j, double x, std::size_t jp, double y) const;

    cplx k() const { return k_; }
    const CMatrix& S() const { return S_; }
    const CMatrix& T() const { return T_; }
    const CVector& R_plus() const { return Rp_; }  // diagonal of R+
    const CMatrix& core() const { return core_; }  // (I - S T)^{-1} S

    // Row j of Phi(x) R+^{-1} as an m-vector, and its x-derivative.
    CVector phi_tilde(std::size_t j, double x) const;
    CVector phi_tilde_dx(std::size_t j, double x) const;

private:
    const MetricGraph* g_;
    cplx k_;
    CMatrix S_, T_, core_;
    CVector Rp_;
};

// Z(kappa) = A X(kappa) - kappa B Y(kappa); zeros give eigenvalues -kappa^2 of -Delta.
// With `balanced`, the terminal-end amplitudes are rescaled by exp(-kappa a) so that
// entries stay bounded; the sign of det changes by a positive factor only.
CMatrix secular_matrix(const MetricGraph& g, const BoundaryConditions& bc, double kappa, bool balanced = false);

struct ScanOptions {
    int grid_points = 400;
    double tol = 1e-10;
    // Reject brackets where sigma_min(Z) exceeds this fraction of max(||A X||, ||kappa B Y||).
    double singular_ratio = 1e-6;
};

// Sorted roots kappa > 0 of det Z in [lo, hi]; lo = 0 is replaced by hi * 1e-6.
std::vector<double> eigenvalue_scan(const MetricGraph& g, const BoundaryConditions& bc, double lo, double hi,
                                    const ScanOptions& opts = {});

struct ResolventResult {
    GraphFunction psi;
    GraphFunction dpsi;         // derivative along each edge
    double tail_estimate = 0.0; // size of the analytic tail beyond the sampled range of external edges
};

// (-Delta - k^2)^{-1} phi by exact integration of the kernel against the piecewise-linear
// interpolant of phi. On external edges phi is continued by its last sample beyond the
// sampled range and that tail is integrated analytically.
ResolventResult resolvent_apply(const MetricGraph& g, const BoundaryConditions& bc, cplx k, const GraphFunction& phi);
ResolventResult resolvent_apply(const GreenKernel& G, const MetricGraph& g, const GraphFunction& phi);

// Kernel values on an n x n grid per edge pair; external edges are sampled on [0, 40/kappa].
struct KernelSample {
    std::size_t j, jp;
    double x, y;
    cplx value;
};
std::vector<KernelSample> sample_kernel(const MetricGraph& g, const GreenKernel& G, int n = 16);

struct FellerNorm {
    double value = 0.0;  // sup of u over the sampled grid
    std::size_t edge = 0;
    double x = 0.0;
};

// sup_x u(x) with u = (-Delta + kappa^2)^{-1} 1. Throws NonpositiveKernel if the kernel has a
// negative entry on the 16 x 16 sample grid.
FellerNorm feller_sup_norm(const MetricGraph& g, const BoundaryConditions& bc, double kappa, int points_per_edge = 4001);

} // namespace mgsg
