#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covop/eigen.hpp"
#include "covop/errors.hpp"
#include "covop/graph.hpp"
#include "covop/laplacian.hpp"
#include "covop/rng.hpp"

using covop::Graph;
using covop::Laplacian;
using covop::Rng;
using covop::Spectrum;

namespace {

Graph grid4(int rows, int cols) {
    Graph g(rows * cols);
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
            if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
        }
    return g;
}

// Random connected graph: random spanning tree plus extra random edges.
Graph random_connected(int n, int extra, Rng& rng) {
    Graph g(n);
    for (int v = 1; v < n; ++v) g.add_edge(v, static_cast<int>(rng.next_below(v)));
    for (int t = 0; t < extra; ++t) {
        int u = static_cast<int>(rng.next_below(n));
        int v = static_cast<int>(rng.next_below(n));
        if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
    }
    return g;
}

// Ascending eigenvalues of the dense Laplacian: brute-force reference.
std::vector<double> dense_eigenvalues(const Graph& g, Laplacian kind) {
    auto a = covop::dense_laplacian(g, kind);
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    covop::jacobi_eigensolve(a, g.node_count(), values, vectors);
    return values;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("jacobi reproduces a hand-diagonalizable matrix") {
    // [[2,1],[1,2]] has eigenvalues 1 and 3.
    std::vector<double> a{2, 1, 1, 2};
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    covop::jacobi_eigensolve(a, 2, values, vectors);
    CHECK(values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(values[1] == doctest::Approx(3.0).epsilon(1e-12));
    // eigenvector for 3 is (1,1)/sqrt(2) up to sign
    CHECK(std::fabs(vectors[1][0]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    CHECK(vectors[1][0] * vectors[1][1] > 0.0);
}

TEST_CASE("jacobi satisfies A v = lambda v on random symmetric matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(rng.next_below(6));
        std::vector<double> a(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double x = 2.0 * rng.next_double() - 1.0;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        std::vector<double> kept = a;
        std::vector<double> values;
        std::vector<std::vector<double>> vectors;
        covop::jacobi_eigensolve(a, n, values, vectors);
        for (int e = 0; e < n; ++e) {
            if (e > 0) CHECK(values[e] >= values[e - 1]);  // ascending
            CHECK(norm2(vectors[e]) == doctest::Approx(1.0).epsilon(1e-10));
            double resid = 0.0;
            for (int i = 0; i < n; ++i) {
                double av = 0.0;
                for (int j = 0; j < n; ++j) av += kept[i * n + j] * vectors[e][j];
                resid += std::pow(av - values[e] * vectors[e][i], 2);
            }
            CHECK(std::sqrt(resid) < 1e-9);
        }
    }
}

TEST_CASE("fix_sign pins the largest-magnitude entry positive") {
    std::vector<double> v{-0.1, -0.9, 0.3};
    covop::fix_sign(v);
    CHECK(v[1] == doctest::Approx(0.9));
    CHECK(v[0] == doctest::Approx(0.1));
    // ties keep the lowest index
    std::vector<double> tie{-0.5, 0.5};
    covop::fix_sign(tie);
    CHECK(tie[0] == doctest::Approx(0.5));
    CHECK(tie[1] == doctest::Approx(-0.5));
}

TEST_CASE("known small spectra: path, triangle, cycle") {
    // Normalized Laplacian of P3: eigenvalues 0, 1, 2; Fiedler ~ (1, 0, -1).
    Graph p3(3, {{0, 1}, {1, 2}});
    Spectrum s = covop::smallest_eigenpairs(p3, 3);
    CHECK(s.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.eigenvalues[2] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(s.fiedler()[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(s.fiedler()[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(s.fiedler()[2] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-6));
    CHECK_FALSE(covop::multiplicity_above_one(s));

    // K3 normalized: 0, 1.5, 1.5 (a repeated lambda2).
    Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
    Spectrum sk = covop::smallest_eigenpairs(k3, 3);
    CHECK(sk.eigenvalues[1] == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(sk.eigenvalues[2] == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(covop::multiplicity_above_one(sk));

    // C4: normalized (0, 1, 1, 2), combinatorial (0, 2, 2, 4).
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    Spectrum cn = covop::smallest_eigenpairs(c4, 4, Laplacian::normalized);
    CHECK(cn.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cn.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cn.eigenvalues[3] == doctest::Approx(2.0).epsilon(1e-8));
    Spectrum cc = covop::smallest_eigenpairs(c4, 4, Laplacian::combinatorial);
    CHECK(cc.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(cc.eigenvalues[3] == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("open grid spectra match high-precision references") {
    Graph nine = grid4(9, 9);
    Spectrum comb = covop::smallest_eigenpairs(nine, 4, Laplacian::combinatorial);
    CHECK(comb.eigenvalues[1] == doctest::Approx(0.120614758428).epsilon(1e-7));
    CHECK(comb.eigenvalues[2] == doctest::Approx(0.120614758428).epsilon(1e-7));
    CHECK(comb.eigenvalues[3] == doctest::Approx(0.241229516856).epsilon(1e-7));
    CHECK(covop::multiplicity_above_one(comb, 1e-9));

    Spectrum norm = covop::smallest_eigenpairs(nine, 3, Laplacian::normalized);
    CHECK(norm.eigenvalues[1] == doctest::Approx(0.035874048261).epsilon(1e-7));
    CHECK(covop::multiplicity_above_one(norm, 1e-9));
}

TEST_CASE("subspace iteration agrees with the dense reference") {
    Rng rng(202);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(5));  // n in [4, 8]
        Graph g = random_connected(n, 1 + static_cast<int>(rng.next_below(2 * n)), rng);
        for (Laplacian kind : {Laplacian::normalized, Laplacian::combinatorial}) {
            auto ref = dense_eigenvalues(g, kind);
            int k = std::min(4, n);
            Spectrum s = covop::smallest_eigenpairs(g, k, kind, 1e-10);
            for (int e = 0; e < k; ++e)
                CHECK(std::fabs(s.eigenvalues[e] - ref[e]) < 1e-6);
        }
    }
}

TEST_CASE("returned pairs are orthonormal with small explicit residuals") {
    Rng rng(303);
    Graph g = random_connected(30, 40, rng);
    for (Laplacian kind : {Laplacian::normalized, Laplacian::combinatorial}) {
        Spectrum s = covop::smallest_eigenpairs(g, 5, kind, 1e-9);
        CHECK(s.tolerance <= 1e-9);
        CHECK(s.iterations > 0);
        covop::LaplacianOp op(g, kind);
        std::vector<double> y(g.node_count());
        for (int e = 0; e < 5; ++e) {
            CHECK(norm2(s.eigenvectors[e]) == doctest::Approx(1.0).epsilon(1e-8));
            op.matvec(s.eigenvectors[e].data(), y.data());
            double resid = 0.0;
            for (int i = 0; i < g.node_count(); ++i)
                resid += std::pow(y[i] - s.eigenvalues[e] * s.eigenvectors[e][i], 2);
            CHECK(std::sqrt(resid) <= 1e-8);
            for (int f = 0; f < e; ++f) {
                double d = 0.0;
                for (int i = 0; i < g.node_count(); ++i)
                    d += s.eigenvectors[e][i] * s.eigenvectors[f][i];
                CHECK(std::fabs(d) < 1e-7);
            }
        }
        if (kind == Laplacian::normalized)
            for (double lam : s.eigenvalues) {
                CHECK(lam >= -1e-12);
                CHECK(lam <= 2.0 + 1e-9);
            }
    }
}

TEST_CASE("bad inputs are rejected") {
    Graph split(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(covop::smallest_eigenpairs(split, 2), covop::Disconnected);
    Graph p3(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(covop::smallest_eigenpairs(p3, 1), covop::Error);
    CHECK_THROWS_AS(covop::smallest_eigenpairs(p3, 4), covop::Error);
}

TEST_CASE("combinatorial lambda2 never drops when an edge is added") {
    Rng rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 5 + static_cast<int>(rng.next_below(4));
        Graph g = random_connected(n, static_cast<int>(rng.next_below(n)), rng);
        if (g.is_complete()) continue;
        auto before = dense_eigenvalues(g, Laplacian::combinatorial);
        // pick the first absent pair after a random offset
        Graph h = g;
        bool added = false;
        int start = static_cast<int>(rng.next_below(n));
        for (int du = 0; du < n && !added; ++du)
            for (int v = 0; v < n && !added; ++v) {
                int u = (start + du) % n;
                if (u != v && !h.has_edge(u, v)) {
                    h.add_edge(u, v);
                    added = true;
                }
            }
        REQUIRE(added);
        auto after = dense_eigenvalues(h, Laplacian::combinatorial);
        CHECK(after[1] >= before[1] - 1e-10);
    }
}

TEST_CASE("spectral drawing separates a path's endpoints") {
    Graph p5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto coords = covop::spectral_drawing(p5);
    CHECK(coords.size() == 5);
    // first coordinate is the Fiedler entry: monotone along the path (the
    // normalized vector can plateau where the degree changes)
    for (int i = 0; i + 1 < 5; ++i) CHECK(coords[i].first >= coords[i + 1].first - 1e-9);
    CHECK(coords[0].first > coords[4].first + 0.1);
    CHECK_THROWS_AS(covop::spectral_drawing(Graph(2, {{0, 1}})), covop::Error);
}
