#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace orbit {

/// Dense real vector: an element of the finite-dimensional Hilbert space.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    static Vector unit(std::size_t dim, std::size_t axis);

    std::size_t dim() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    const std::vector<double>& std_vector() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double s);

    /// this += s * other
    void axpy(double s, const Vector& other);

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector v);
Vector operator*(Vector v, double s);

/// Dense real matrix, row-major. Operators on H are square; the open
/// mapping radius also accepts rectangular maps.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix diagonal(std::initializer_list<double> diag);
    static Matrix from_columns(std::span<const Vector> columns);
    static Matrix outer(const Vector& u, const Vector& v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    Vector row(std::size_t i) const;
    Vector column(std::size_t j) const;

    Matrix transpose() const;
    Vector apply(const Vector& v) const;
    /// (M^T) v without forming the transpose.
    Vector apply_transpose(const Vector& v) const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    /// this += s * other
    void axpy(double s, const Matrix& other);

    bool all_finite() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);

double inner(const Vector& u, const Vector& v);
double norm(const Vector& v);
double squared_norm(const Vector& v);
double distance(const Vector& u, const Vector& v);

/// Frobenius inner product <A, B> = trace(A^T B).
double frobenius_inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& m);
/// Largest absolute entry of a - b; used by algebraic identity checks.
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

/// Gram-Schmidt output: an orthonormal basis of span(inputs).
struct OrthonormalBasis {
    std::vector<Vector> q;
    std::size_t rank = 0;
};

/// Modified Gram-Schmidt with one reorthogonalization pass. An input is
/// dropped when its residual is at most rank_tol times the largest input
/// norm.
OrthonormalBasis orthonormalize(std::span<const Vector> vs, double rank_tol);

/// Orthogonal projector sum_j q_j q_j^T onto span(q).
Matrix projector(std::span<const Vector> q, std::size_t dim);

struct SingularTriplet {
    double sigma = 0.0;
    Vector left;   // unit u with M v = sigma u
    Vector right;  // unit v
};

struct SingularValues {
    std::vector<double> values;          // descending, min(rows, cols) entries
    std::vector<Vector> right_vectors;   // matching right singular vectors
    int iterations = 0;
};

/// Singular values by power iteration with deflation on M^T M. Throws
/// SolverError when an eigenpair fails to settle within the budget.
SingularValues singular_value_decomposition(const Matrix& m, double tol,
                                            int max_iterations = 5000);

std::vector<double> singular_values(const Matrix& m, double tol);

/// Dominant singular triplet; the right vector comes from the power
/// method on M^T M.
SingularTriplet top_singular_triplet(const Matrix& m, double tol = 1e-13);

/// sigma_1(M), the operator norm.
double spectral_norm(const Matrix& m, double tol = 1e-13);

/// Solves S x = b for symmetric positive definite S. Throws SolverError
/// if S is not numerically positive definite.
Vector cholesky_solve(const Matrix& spd, const Vector& b);

/// Inverse of a symmetric positive definite matrix.
Matrix spd_inverse(const Matrix& spd);

}  // namespace orbit
