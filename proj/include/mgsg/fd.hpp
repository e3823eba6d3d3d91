#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mgsg/boundary.hpp"
#include "mgsg/graph.hpp"
#include "mgsg/graph_function.hpp"

namespace mgsg {

using SparseC = Eigen::SparseMatrix<cplx>;

// Second-order finite differences for -Delta on the graph. Every sampled node
// carries a three-point row; the vertex conditions use centred derivatives
// through one ghost node per trace index. External edges are cut at
// `external_extent` with a Dirichlet row.
class FdOperator {
public:
    FdOperator(const MetricGraph& g, const BoundaryConditions& bc, double h, double external_extent);

    Eigen::Index size() const { return size_; }
    // -Laplacian on node rows, boundary and cut-off constraints on the remaining rows.
    const SparseC& stiffness() const { return K_; }
    // 1 on rows that carry a time derivative, 0 on constraint rows.
    const Eigen::VectorXd& mass() const { return mass_; }

    Eigen::Index node(std::size_t j, std::size_t n) const { return offset_[j] + static_cast<Eigen::Index>(n); }
    std::size_t intervals(std::size_t j) const { return intervals_[j]; }
    double step(std::size_t j) const { return step_[j]; }
    // Nearest grid node to x on edge j.
    std::size_t nearest(std::size_t j, double x) const;

    GraphFunction to_function(const CVector& u) const;
    CVector from_function(const GraphFunction& f) const;
    const MetricGraph& graph() const { return *g_; }

private:
    const MetricGraph* g_;
    Eigen::Index size_ = 0;
    std::vector<Eigen::Index> offset_;
    std::vector<std::size_t> intervals_;
    std::vector<double> step_;
    SparseC K_;
    Eigen::VectorXd mass_;
};

// Discrete Green's function of (-Delta - k^2) from a unit source at one node.
class FdResolvent {
public:
    FdResolvent(const FdOperator& op, cplx k);
    // Value at (j, x) for the source at (jp, y); both points are moved to the nearest nodes.
    cplx green(std::size_t j, double x, std::size_t jp, double y) const;

private:
    const FdOperator* op_;
    std::unique_ptr<Eigen::SparseLU<SparseC>> lu_;
};

} // namespace mgsg
