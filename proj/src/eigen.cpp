#include "covop/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "covop/errors.hpp"
#include "covop/rng.hpp"

namespace covop {

void fix_sign(std::vector<double>& v) {
    double mag = 0.0;
    for (double x : v) mag = std::max(mag, std::fabs(x));
    if (mag == 0.0) return;
    // Symmetric graphs carry exactly tied magnitudes that iterative solvers
    // perturb at roundoff scale; a tolerance window keeps the tie-break
    // ("lowest index wins") independent of that noise.
    double cutoff = mag * (1.0 - 1e-6);
    for (size_t i = 0; i < v.size(); ++i) {
        if (std::fabs(v[i]) >= cutoff) {
            if (v[i] < 0.0)
                for (double& x : v) x = -x;
            return;
        }
    }
}

void jacobi_eigensolve(std::vector<double>& a, int n,
                       std::vector<double>& values,
                       std::vector<std::vector<double>>& vectors) {
    auto at = [&](int r, int c) -> double& { return a[static_cast<size_t>(r) * n + c]; };
    std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

    double off0 = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) off0 += at(p, q) * at(p, q);
    double thresh = std::max(1e-30, off0 * 1e-28);

    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off <= thresh) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = at(i, p), aiq = at(i, q);
                    at(i, p) = c * aip - s * aiq;
                    at(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = at(p, i), aqi = at(q, i);
                    at(p, i) = c * api - s * aqi;
                    at(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v[static_cast<size_t>(i) * n + p];
                    double viq = v[static_cast<size_t>(i) * n + q];
                    v[static_cast<size_t>(i) * n + p] = c * vip - s * viq;
                    v[static_cast<size_t>(i) * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return at(x, x) < at(y, y); });
    values.resize(n);
    vectors.assign(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        values[i] = at(order[i], order[i]);
        for (int r = 0; r < n; ++r)
            vectors[i][r] = v[static_cast<size_t>(r) * n + order[i]];
    }
}

namespace {

// Columns of a flat n-by-m column-major block.
struct Block {
    int n, m;
    std::vector<double> data;
    Block(int n_, int m_) : n(n_), m(m_), data(static_cast<size_t>(n_) * m_, 0.0) {}
    double* col(int j) { return data.data() + static_cast<size_t>(j) * n; }
    const double* col(int j) const { return data.data() + static_cast<size_t>(j) * n; }
};

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double* y, double a, const double* x, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

// Project out phi and orthonormalize columns in place (modified Gram-Schmidt,
// re-randomizing any column that collapses).
void orthonormalize(Block& x, const std::vector<double>& phi, Rng& rng) {
    int n = x.n;
    for (int j = 0; j < x.m; ++j) {
        double* xj = x.col(j);
        for (int attempt = 0;; ++attempt) {
            axpy(xj, -dot(phi.data(), xj, n), phi.data(), n);
            for (int i = 0; i < j; ++i)
                axpy(xj, -dot(x.col(i), xj, n), x.col(i), n);
            double nrm = std::sqrt(dot(xj, xj, n));
            if (nrm > 1e-10) {
                for (int r = 0; r < n; ++r) xj[r] /= nrm;
                break;
            }
            if (attempt > 8) throw NoConvergence(0);
            for (int r = 0; r < n; ++r) xj[r] = rng.next_double() - 0.5;
        }
    }
}

}  // namespace

Spectrum smallest_eigenpairs(const Graph& g, int k, Laplacian kind, double tol) {
    int n = g.node_count();
    if (k < 2 || k > n)
        throw Error("smallest_eigenpairs: k must be in [2, n], got " + std::to_string(k));
    if (!g.connected()) throw Disconnected();

    LaplacianOp op(g, kind);
    double sigma = op.spectrum_bound() + 1.0;
    const std::vector<double>& phi = op.null_vector();

    int want = k - 1;                       // pairs beyond the known zero
    int m = std::min(n - 1, want + 6);      // guard vectors speed convergence
    Rng rng(derive_seed(0x9d2c5680u, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(kind == Laplacian::normalized ? 0 : 1),
                        static_cast<std::uint64_t>(k)));

    Block x(n, m);
    for (int j = 0; j < m; ++j)
        for (int r = 0; r < n; ++r) x.col(j)[r] = rng.next_double() - 0.5;
    orthonormalize(x, phi, rng);

    Block lx(n, m);
    std::vector<double> ritz(m);
    long cap = 10L * n * k;
    long sweeps = 0;
    bool converged = false;
    const int ritz_period = 8;

    while (sweeps < cap && !converged) {
        // One shifted power sweep: x <- (sigma I - L) x, deflated.
        ++sweeps;
        for (int j = 0; j < m; ++j) {
            op.matvec(x.col(j), lx.col(j));
            double* xj = x.col(j);
            const double* lj = lx.col(j);
            for (int r = 0; r < n; ++r) xj[r] = sigma * xj[r] - lj[r];
        }
        orthonormalize(x, phi, rng);

        if (sweeps % ritz_period != 0 && sweeps != cap) continue;

        // Rayleigh-Ritz on the current block.
        for (int j = 0; j < m; ++j) op.matvec(x.col(j), lx.col(j));
        std::vector<double> b(static_cast<size_t>(m) * m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double bij = dot(x.col(i), lx.col(j), n);
                b[static_cast<size_t>(i) * m + j] = bij;
                b[static_cast<size_t>(j) * m + i] = bij;
            }
        std::vector<double> theta;
        std::vector<std::vector<double>> w;
        jacobi_eigensolve(b, m, theta, w);

        Block xr(n, m), lr(n, m);
        for (int j = 0; j < m; ++j) {
            double* xc = xr.col(j);
            double* lc = lr.col(j);
            for (int i = 0; i < m; ++i) {
                axpy(xc, w[j][i], x.col(i), n);
                axpy(lc, w[j][i], lx.col(i), n);
            }
        }
        x = xr;
        lx = lr;
        for (int j = 0; j < m; ++j) ritz[j] = theta[j];

        converged = true;
        for (int j = 0; j < want; ++j) {
            double r2 = 0.0;
            for (int i = 0; i < n; ++i) {
                double r = lx.col(j)[i] - ritz[j] * x.col(j)[i];
                r2 += r * r;
            }
            if (std::sqrt(r2) > tol) {
                converged = false;
                break;
            }
        }
    }
    if (!converged) throw NoConvergence(sweeps);

    Spectrum out;
    out.iterations = sweeps;
    out.eigenvalues.resize(k);
    out.eigenvectors.resize(k);
    out.eigenvalues[0] = 0.0;
    out.eigenvectors[0] = phi;
    fix_sign(out.eigenvectors[0]);

    std::vector<double> buf(n);
    double worst = 0.0;
    op.matvec(phi.data(), buf.data());
    worst = std::sqrt(dot(buf.data(), buf.data(), n));
    for (int j = 0; j < want; ++j) {
        out.eigenvalues[j + 1] = ritz[j];
        out.eigenvectors[j + 1].assign(x.col(j), x.col(j) + n);
        fix_sign(out.eigenvectors[j + 1]);
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = lx.col(j)[i] - ritz[j] * x.col(j)[i];
            r2 += r * r;
        }
        worst = std::max(worst, std::sqrt(r2));
    }
    out.tolerance = worst;
    return out;
}

bool multiplicity_above_one(const Spectrum& s, double gap_tol) {
    if (s.eigenvalues.size() < 3)
        throw Error("multiplicity predicate needs at least 3 eigenvalues");
    return (s.eigenvalues[2] - s.eigenvalues[1]) < gap_tol;
}

std::vector<std::pair<double, double>> spectral_drawing(const Graph& g, double tol) {
    if (g.node_count() < 3) throw Error("spectral drawing needs at least 3 nodes");
    Spectrum s = smallest_eigenpairs(g, 3, Laplacian::normalized, tol);
    std::vector<std::pair<double, double>> coords(g.node_count());
    for (int u = 0; u < g.node_count(); ++u)
        coords[u] = {s.eigenvectors[1][u], s.eigenvectors[2][u]};
    return coords;
}

}  // namespace covop
