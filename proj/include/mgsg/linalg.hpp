#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mgsg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

constexpr cplx I_unit{0.0, 1.0};

// Singular values below 100 * eps * sigma_max count as zero.
double rank_threshold(const Eigen::JacobiSVD<CMatrix>& svd);
int numerical_rank(const CMatrix& M);

// Orthonormal basis of ker M as columns.
CMatrix kernel_basis(const CMatrix& M);
// Same, but singular values <= abs_tol count as zero.
CMatrix kernel_basis_abs(const CMatrix& M, double abs_tol);

// Orthogonal projector onto the column span of Q (Q need not be orthonormal).
CMatrix span_projector(const CMatrix& Q);

double spectral_norm(const CMatrix& M);

// Largest eigenvalue of a Hermitian matrix (only the lower triangle is read).
double max_hermitian_eigenvalue(const CMatrix& H);
double min_hermitian_eigenvalue(const CMatrix& H);

CMatrix hermitian_part(const CMatrix& M);      // (M + M^*)/2
CMatrix antihermitian_part(const CMatrix& M);  // (M - M^*)/(2i)

// Solves M X = R; returns false when M is numerically singular.
bool checked_solve(const CMatrix& M, const CMatrix& R, CMatrix& X, double rcond_min = 1e-13);

CVector ones(Eigen::Index n);

} // namespace mgsg
