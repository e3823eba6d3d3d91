#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mgsg/graph.hpp"
#include "mgsg/linalg.hpp"

namespace mgsg {

// Boundary conditions A psi + B psi' = 0 on the trace space K.
class BoundaryConditions {
public:
    BoundaryConditions() = default;
    // Throws DimensionMismatch or RankDeficient.
    BoundaryConditions(CMatrix A, CMatrix B);

    const CMatrix& A() const { return A_; }
    const CMatrix& B() const { return B_; }
    Eigen::Index dim() const { return A_.rows(); }
    CMatrix stacked() const;                          // the m x 2m block (A, B)
    const CMatrix& kernel() const { return kernel_; } // orthonormal basis of M(A,B), 2m x m
    const CMatrix& complement_projector() const { return p_perp_; }

private:
    CMatrix A_, B_;
    CMatrix kernel_;
    CMatrix p_perp_;
};

struct VertexConditions {
    std::string vertex;
    CMatrix A, B;
};

enum class VertexKind { Dirichlet, Delta, Standard, Generic };

struct VertexSpec {
    VertexKind kind = VertexKind::Standard;
    cplx gamma{0.0, 0.0};  // Delta
    int alpha = 0;         // Generic: 0 or -1
    CVector g;             // Generic

    static VertexSpec dirichlet() { return {VertexKind::Dirichlet, {}, 0, {}}; }
    static VertexSpec delta(cplx gamma) { return {VertexKind::Delta, gamma, 0, {}}; }
    static VertexSpec standard() { return {VertexKind::Standard, {}, 0, {}}; }
    static VertexSpec generic(int alpha, CVector g) { return {VertexKind::Generic, {}, alpha, std::move(g)}; }
};

bool check_rank(const CMatrix& A, const CMatrix& B);

VertexConditions make_vertex_conditions(const VertexSpec& spec, std::size_t degree, const std::string& vertex = {});

// Form (iii): rows of differences, last row -gamma e_n^T in A and p^T in B.
VertexConditions canonical_vertex_conditions(cplx gamma, const CVector& p, const std::string& vertex = {});

BoundaryConditions assemble_global(const MetricGraph& g, const std::vector<VertexConditions>& per_vertex);
BoundaryConditions assemble_global(const MetricGraph& g, const std::map<std::string, VertexSpec>& specs);

// Non-local conditions coupling vertex values through C; Dirichlet at `special`.
BoundaryConditions assemble_nonlocal_mugnolo(const MetricGraph& g, const CMatrix& C, const std::string& special);

CMatrix projection_complement(const CMatrix& A, const CMatrix& B);
bool equivalent(const BoundaryConditions& a, const BoundaryConditions& b, double tol = 1e-10);

CMatrix smatrix(const CMatrix& A, const CMatrix& B, cplx k);
CMatrix smatrix(const BoundaryConditions& bc, cplx k);
CMatrix smatrix_closed_form(int alpha, const CVector& g, cplx k);

struct ClassifyOptions {
    std::vector<double> kappas{0.5, 1.0, 3.0};
    std::vector<double> ks{0.5, 1.0, 3.0};
    double tol = 1e-10;
};

struct ClassificationReport {
    bool rank_ok = false;
    bool re_ab_neg_semidef = false;
    bool im_ab_neg_semidef = false;
    bool self_adjoint = false;
    double self_adjoint_discrepancy = 0.0;  // max |(AB^* - BA^*)_ij|
    double max_eig_re_ab = 0.0;
    double max_eig_im_ab = 0.0;
    std::vector<std::pair<double, bool>> s_contraction;          // kappa -> ||S(i kappa)|| <= 1
    std::vector<std::pair<double, bool>> s_minus_k_contraction;  // k -> ||S(-k)|| <= 1
    std::string accretivity_note;
};

ClassificationReport classify_operator(const BoundaryConditions& bc, const ClassifyOptions& opts = {});

// Throws NotLocal when M(A,B) does not split over the vertices.
std::vector<VertexConditions> decompose_local(const MetricGraph& g, const BoundaryConditions& bc, double tol = 1e-9);

struct ContinuityForm {
    enum class Kind { Dirichlet, Generic } kind = Kind::Dirichlet;
    int alpha = 0;
    CVector g;           // for alpha = -1 normalised so that <g, h> = -deg
    cplx gamma{0.0, 0.0}; // canonical form (iii)
    CVector p;
    std::size_t degree() const { return static_cast<std::size_t>(g.size()); }
    cplx g_dot_h() const { return g.size() ? g.adjoint() * CVector::Ones(g.size()) : cplx{0.0, 0.0}; }
};

// Single vertex. Throws NotContinuous.
ContinuityForm continuity_form(const CMatrix& Av, const CMatrix& Bv, double tol = 1e-9);
// Whole graph. Throws NotLocalInput or NotContinuous.
std::vector<ContinuityForm> continuity_forms(const MetricGraph& g, const BoundaryConditions& bc);

// (A_v, B_v) rebuilt from a form via the generic-form matrices.
VertexConditions form_matrices(const ContinuityForm& f);
CMatrix smatrix_of_form(const ContinuityForm& f, cplx k);

enum class PositivityClass { StrictlyPositive, Positive, NotPositive };
const char* positivity_name(PositivityClass c);

struct PositivityReport {
    PositivityClass cls = PositivityClass::NotPositive;
    std::vector<double> kappa_grid;
    bool grid_nonnegative = false;  // I + S(i kappa) >= -1e-12 entrywise on the grid
    double min_entry = 0.0;
};

PositivityReport positivity_class(const ContinuityForm& f);

struct SubstochasticReport {
    bool substochastic = false;
    cplx factor{1.0, 0.0};  // S h = factor * h
};

SubstochasticReport substochastic_check(const ContinuityForm& f, double kappa);

// Eigenvalues of S(i kappa) for one vertex form.
std::vector<cplx> vertex_spectrum(const ContinuityForm& f, double kappa);

enum class FellerVerdict { YesIff, YesSufficient, No, Unknown };
const char* feller_name(FellerVerdict v);

FellerVerdict feller_check(const MetricGraph& g, const std::vector<ContinuityForm>& forms);
// Convenience: decomposes bc first; non-continuous conditions give No (I empty) or Unknown.
FellerVerdict feller_check(const MetricGraph& g, const BoundaryConditions& bc);

} // namespace mgsg
