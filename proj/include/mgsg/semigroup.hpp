#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mgsg/boundary.hpp"
#include "mgsg/graph.hpp"
#include "mgsg/graph_function.hpp"

namespace mgsg {

// Cut-off used for external edges when evolving up to time t.
double external_extent_for(double t);

struct TalbotOptions {
    int nodes = 32;     // contour nodes; the run is repeated with twice as many for the error estimate
    double tol = 1e-4;  // ContourFailure above tol * max(1, ||psi0||_inf)
};

struct EvolutionResult {
    GraphFunction psi;
    double contour_error = 0.0;        // |nodes vs 2 nodes|_inf
    double interpolation_error = 0.0;  // h^2 |psi0''| / 8 bound of the piecewise-linear data
    double shift = 0.0;                // contour shift past real eigenvalues of Delta
    double error_estimate() const { return contour_error + interpolation_error; }
};

// e^{t Delta} psi0 by a Talbot contour integral of the resolvent.
// Throws NotAGenerator when the resolvent fails on the contour, ContourFailure when the
// doubled-node estimate exceeds the tolerance.
EvolutionResult evolve_spectral(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0, double t,
                                const TalbotOptions& opts = {});

// Crank-Nicolson (after four backward Euler half steps) on the finite-difference operator.
// Output lives on the finite-difference grid of step about h.
GraphFunction evolve_fd_oracle(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0, double t,
                               double h, double dt);

struct SemigroupCheck {
    double t = 0.0;
    double norm0 = 0.0, norm_t = 0.0;
    bool contraction = true;
    bool positivity_tested = false;
    double min_real = 0.0, max_abs_imag = 0.0;
    bool positive = true;
    bool continuity_tested = false;
    double continuity = 0.0;
    bool continuous = true;
    double error_estimate = 0.0;
};

struct SemigroupReport {
    std::vector<SemigroupCheck> checks;
    bool accretive = false;        // Re(AB*) <= 0, so the L2 contraction is expected
    bool positive_class = false;   // every vertex form positive
    bool continuity_class = false; // every vertex of continuity type
    bool all_ok() const;
};

SemigroupReport verify_semigroup_properties(const MetricGraph& g, const BoundaryConditions& bc, const GraphFunction& psi0,
                                            const std::vector<double>& times, const TalbotOptions& opts = {},
                                            double tol = 1e-6);

struct PositivityWitness {
    GraphFunction psi0;
    std::size_t edge = 0;
    double x = 0.0;
    double value = 0.0;  // most negative real part found
    int attempt = 0;
};

// Random nonnegative piecewise-linear data; returns the first datum whose evolution has
// a real part below -1e-6.
std::optional<PositivityWitness> search_positivity_witness(const MetricGraph& g, const BoundaryConditions& bc, double t,
                                                           std::uint64_t seed, int attempts = 50, double step = 1.0 / 128);

} // namespace mgsg
