#pragma once

// Brute-force references that share no code with the library solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "orbit/linalg.hpp"
#include "orbit/operator_space.hpp"

namespace oracle {

using orbit::Matrix;
using orbit::Vector;

inline double apply_norm(const Matrix& m, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) r += m(i, j) * v[j];
        s += r * r;
    }
    return std::sqrt(s);
}

// Singular values of m by cyclic Jacobi sweeps on m^T m, descending.
inline std::vector<double> jacobi_singular_values(const Matrix& m) {
    const std::size_t n = m.cols();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < m.rows(); ++r) a[i][j] += m(r, i) * m(r, j);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::sqrt(std::max(0.0, a[i][i])));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

// max ||M v|| over a grid on the unit sphere (dim 2 or 3).
inline double sphere_grid_sigma1(const Matrix& m, int steps = 2000) {
    double best = 0.0;
    const double pi = std::numbers::pi;
    if (m.cols() == 2) {
        for (int i = 0; i < steps; ++i) {
            const double t = pi * i / steps;
            best = std::max(best, apply_norm(m, {std::cos(t), std::sin(t)}));
        }
        return best;
    }
    const int half = steps / 2;
    for (int i = 0; i <= half; ++i) {
        const double phi = pi * i / half;
        for (int j = 0; j < steps; ++j) {
            const double t = 2 * pi * j / steps;
            best = std::max(best, apply_norm(m, {std::sin(phi) * std::cos(t),
                                                 std::sin(phi) * std::sin(t), std::cos(phi)}));
        }
    }
    return best;
}

// min ||M v|| over the same grid: smallest singular value of a square M.
inline double sphere_grid_sigma_min(const Matrix& m, int steps = 2000) {
    double best = 1e300;
    const double pi = std::numbers::pi;
    if (m.cols() == 2) {
        for (int i = 0; i < steps; ++i) {
            const double t = pi * i / steps;
            best = std::min(best, apply_norm(m, {std::cos(t), std::sin(t)}));
        }
        return best;
    }
    const int half = steps / 2;
    for (int i = 0; i <= half; ++i) {
        const double phi = pi * i / half;
        for (int j = 0; j < steps; ++j) {
            const double t = 2 * pi * j / steps;
            best = std::min(best, apply_norm(m, {std::sin(phi) * std::cos(t),
                                                 std::sin(phi) * std::sin(t), std::cos(phi)}));
        }
    }
    return best;
}

// Rank by Gaussian elimination with partial pivoting, rows = vectors.
inline std::size_t gauss_rank(std::vector<std::vector<double>> a, double tol) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size();
    const std::size_t cols = a.front().size();
    double scale = 0.0;
    for (const auto& r : a)
        for (double v : r) scale = std::max(scale, std::abs(v));
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        for (std::size_t r = rank; r < rows; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) <= tol * scale) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            const double f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Distance from y to the box [-n|x1|, n|x1|] x [-n|x2|, n|x2|], which is
// n A_1 x for the diagonal algebra.
inline double diag_box_distance(const Vector& y, const Vector& x, double n) {
    const double dx = std::max(0.0, std::abs(y[0]) - n * std::abs(x[0]));
    const double dy = std::max(0.0, std::abs(y[1]) - n * std::abs(x[1]));
    return std::hypot(dx, dy);
}

// ||y - P y|| with P built from a Gaussian-elimination-free least squares:
// minimize over the orbit span by normal equations on B_i x.
inline double span_distance(const Vector& y, const std::vector<Vector>& span) {
    // Orthogonalize with plain classical Gram-Schmidt, twice.
    std::vector<Vector> q;
    double scale = 0.0;
    for (const auto& v : span) scale = std::max(scale, orbit::norm(v));
    for (Vector v : span) {
        for (int pass = 0; pass < 2; ++pass) {
            Vector c = v;
            for (const auto& e : q) {
                const double t = orbit::inner(e, c);
                for (std::size_t i = 0; i < v.dim(); ++i) v[i] -= t * e[i];
            }
        }
        const double nv = orbit::norm(v);
        if (nv > 1e-9 * scale) q.push_back((1.0 / nv) * v);
    }
    Vector r = y;
    for (const auto& e : q) r.axpy(-orbit::inner(e, y), e);
    return orbit::norm(r);
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                            double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = g(rng);
    return v;
}

}  // namespace oracle
