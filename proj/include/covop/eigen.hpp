#pragma once

#include <vector>

#include "covop/graph.hpp"
#include "covop/laplacian.hpp"

namespace covop {

struct Spectrum {
    std::vector<double> eigenvalues;                // ascending, size k
    std::vector<std::vector<double>> eigenvectors;  // unit norm, same order
    double tolerance = 0.0;  // largest residual ||L v - lambda v|| achieved
    long iterations = 0;     // operator sweeps spent

    double lambda2() const { return eigenvalues.at(1); }
    double lambda3() const { return eigenvalues.at(2); }
    const std::vector<double>& fiedler() const { return eigenvectors.at(1); }
};

// k smallest eigenpairs of the chosen Laplacian of a connected graph.
// Deflated subspace iteration: the known zero-eigenvalue vector is projected
// out, a guarded block is driven by the shifted operator, and Rayleigh-Ritz
// extracts the pairs. Residuals are verified against `tol` by explicit matvec.
// Throws Disconnected, NoConvergence.
Spectrum smallest_eigenpairs(const Graph& g, int k, Laplacian kind,
                             double tol = 1e-8);

// Module default: the normalized Laplacian.
inline Spectrum smallest_eigenpairs(const Graph& g, int k, double tol = 1e-8) {
    return smallest_eigenpairs(g, k, Laplacian::normalized, tol);
}

// Gap predicate for the second eigenvalue's multiplicity (needs k >= 3).
bool multiplicity_above_one(const Spectrum& s, double gap_tol = 1e-9);

// Flip the vector so its largest-magnitude entry is positive (ties: lowest
// index wins). Shared by the eigensolver and the discovery canonicalization.
void fix_sign(std::vector<double>& v);

// Dense symmetric eigensolver (cyclic Jacobi). `a` is row-major n*n and gets
// destroyed. Returns ascending eigenvalues; `vectors[i]` is the i-th
// eigenvector. Brute-force reference for tests and the Rayleigh-Ritz step.
void jacobi_eigensolve(std::vector<double>& a, int n,
                       std::vector<double>& values,
                       std::vector<std::vector<double>>& vectors);

// Per-node coordinates (v2[u], v3[u]) from the normalized Laplacian.
std::vector<std::pair<double, double>> spectral_drawing(const Graph& g,
                                                        double tol = 1e-8);

}  // namespace covop
