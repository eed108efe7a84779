#include "covop/laplacian.hpp"

#include <algorithm>
#include <cmath>

#include "covop/errors.hpp"

namespace covop {

LaplacianOp::LaplacianOp(const Graph& g, Laplacian kind) : g_(&g), kind_(kind) {
    int n = g.node_count();
    if (kind == Laplacian::normalized) {
        inv_sqrt_deg_.resize(n);
        for (int u = 0; u < n; ++u) {
            int d = g.degree(u);
            if (d == 0) throw IsolatedNode(u);
            inv_sqrt_deg_[u] = 1.0 / std::sqrt(static_cast<double>(d));
        }
        bound_ = 2.0;
        // Null vector proportional to sqrt(d_u).
        null_vec_.resize(n);
        double norm = 0.0;
        for (int u = 0; u < n; ++u) {
            null_vec_[u] = std::sqrt(static_cast<double>(g.degree(u)));
            norm += null_vec_[u] * null_vec_[u];
        }
        norm = std::sqrt(norm);
        for (double& x : null_vec_) x /= norm;
    } else {
        // lambda_max(D - A) <= max over edges of d_u + d_v.
        double b = 0.0;
        for (const auto& [u, v] : g.edges())
            b = std::max(b, static_cast<double>(g.degree(u) + g.degree(v)));
        bound_ = std::max(b, 1.0);
        null_vec_.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    }
}

void LaplacianOp::matvec(const double* x, double* y) const {
    int n = g_->node_count();
    if (kind_ == Laplacian::normalized) {
        for (int u = 0; u < n; ++u) {
            double acc = x[u];
            double du = inv_sqrt_deg_[u];
            for (int v : g_->neighbors(u)) acc -= du * inv_sqrt_deg_[v] * x[v];
            y[u] = acc;
        }
    } else {
        for (int u = 0; u < n; ++u) {
            double acc = static_cast<double>(g_->degree(u)) * x[u];
            for (int v : g_->neighbors(u)) acc -= x[v];
            y[u] = acc;
        }
    }
}

std::vector<double> dense_laplacian(const Graph& g, Laplacian kind) {
    int n = g.node_count();
    std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
    if (kind == Laplacian::normalized) {
        for (int u = 0; u < n; ++u) {
            if (g.degree(u) == 0) throw IsolatedNode(u);
            m[static_cast<size_t>(u) * n + u] = 1.0;
        }
        for (const auto& [u, v] : g.edges()) {
            double w = -1.0 / std::sqrt(static_cast<double>(g.degree(u)) *
                                        static_cast<double>(g.degree(v)));
            m[static_cast<size_t>(u) * n + v] = w;
            m[static_cast<size_t>(v) * n + u] = w;
        }
    } else {
        for (int u = 0; u < n; ++u)
            m[static_cast<size_t>(u) * n + u] = static_cast<double>(g.degree(u));
        for (const auto& [u, v] : g.edges()) {
            m[static_cast<size_t>(u) * n + v] = -1.0;
            m[static_cast<size_t>(v) * n + u] = -1.0;
        }
    }
    return m;
}

}  // namespace covop
