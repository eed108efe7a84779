#pragma once

#include <vector>

#include "covop/graph.hpp"

namespace covop {

enum class Laplacian {
    normalized,     // I - D^{-1/2} A D^{-1/2}
    combinatorial,  // D - A
};

// Matrix-free symmetric operator for either Laplacian. O(|E|) matvec.
class LaplacianOp {
  public:
    LaplacianOp(const Graph& g, Laplacian kind);

    int size() const { return g_->node_count(); }
    Laplacian kind() const { return kind_; }

    // y = L x
    void matvec(const double* x, double* y) const;

    // Strict upper bound on the spectrum (used as the spectral shift).
    double spectrum_bound() const { return bound_; }

    // Unit eigenvector for the known eigenvalue 0 of a connected graph:
    // entries proportional to sqrt(degree) (normalized) or all-ones
    // (combinatorial).
    const std::vector<double>& null_vector() const { return null_vec_; }

  private:
    const Graph* g_;
    Laplacian kind_;
    double bound_;
    std::vector<double> inv_sqrt_deg_;  // normalized only
    std::vector<double> null_vec_;
};

// Dense n-by-n copy, row-major. Test oracle and small-graph reference.
std::vector<double> dense_laplacian(const Graph& g, Laplacian kind);

}  // namespace covop
