#include "mgsg/linalg.hpp"

#include <limits>

namespace mgsg {

double rank_threshold(const Eigen::JacobiSVD<CMatrix>& svd)
{
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    return 100.0 * std::numeric_limits<double>::epsilon() * smax;
}

int numerical_rank(const CMatrix& M)
{
    if (M.size() == 0)
        return 0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    double thr = rank_threshold(svd);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr)
            ++r;
    return r;
}

CMatrix kernel_basis(const CMatrix& M)
{
    const Eigen::Index n = M.cols();
    if (M.rows() == 0)
        return CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    double thr = rank_threshold(svd);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr)
            ++r;
    return svd.matrixV().rightCols(n - r);
}

CMatrix kernel_basis_abs(const CMatrix& M, double abs_tol)
{
    const Eigen::Index n = M.cols();
    if (M.rows() == 0)
        return CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > abs_tol)
            ++r;
    return svd.matrixV().rightCols(n - r);
}

CMatrix span_projector(const CMatrix& Q)
{
    const Eigen::Index n = Q.rows();
    if (Q.cols() == 0)
        return CMatrix::Zero(n, n);
    Eigen::JacobiSVD<CMatrix> svd(Q, Eigen::ComputeThinU);
    double thr = rank_threshold(svd);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr)
            ++r;
    CMatrix U = svd.matrixU().leftCols(r);
    return U * U.adjoint();
}

double spectral_norm(const CMatrix& M)
{
    if (M.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(0);
}

double max_hermitian_eigenvalue(const CMatrix& H)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double min_hermitian_eigenvalue(const CMatrix& H)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CMatrix hermitian_part(const CMatrix& M)
{
    return (M + M.adjoint()) / 2.0;
}

CMatrix antihermitian_part(const CMatrix& M)
{
    return (M - M.adjoint()) / (2.0 * I_unit);
}

bool checked_solve(const CMatrix& M, const CMatrix& R, CMatrix& X, double rcond_min)
{
    Eigen::PartialPivLU<CMatrix> lu(M);
    if (!(lu.rcond() > rcond_min))
        return false;
    X = lu.solve(R);
    return X.allFinite();
}

CVector ones(Eigen::Index n)
{
    return CVector::Ones(n);
}

} // namespace mgsg
