#include "orbit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "orbit/errors.hpp"

namespace orbit {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InputError(std::string(what) + ": shape mismatch");
    }
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector Vector::unit(std::size_t dim, std::size_t axis) {
    Vector e(dim);
    e[axis] = 1.0;
    return e;
}

Vector& Vector::operator+=(const Vector& other) {
    require_same_dim(dim(), other.dim(), "vector add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_dim(dim(), other.dim(), "vector subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

void Vector::axpy(double s, const Vector& other) {
    require_same_dim(dim(), other.dim(), "vector axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator*(Vector v, double s) { return v *= s; }

double inner(const Vector& u, const Vector& v) {
    require_same_dim(u.dim(), v.dim(), "inner");
    double sum = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) sum += u[i] * v[i];
    return sum;
}

double squared_norm(const Vector& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return sum;
}

double norm(const Vector& v) {
    // Scaled accumulation keeps tiny and huge entries from under/overflowing.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double sum = 0.0;
    for (double x : v) {
        const double t = x / scale;
        sum += t * t;
    }
    return scale * std::sqrt(sum);
}

double distance(const Vector& u, const Vector& v) { return norm(u - v); }

double max_abs_diff(const Vector& a, const Vector& b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InputError("matrix literal: ragged rows");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
    if (columns.empty()) return {};
    Matrix m(columns.front().dim(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        require_same_dim(columns[j].dim(), m.rows(), "from_columns");
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = columns[j][i];
    }
    return m;
}

Matrix Matrix::outer(const Vector& u, const Vector& v) {
    Matrix m(u.dim(), v.dim());
    for (std::size_t i = 0; i < u.dim(); ++i)
        for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = u[i] * v[j];
    return m;
}

Vector Matrix::row(std::size_t i) const {
    Vector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

Vector Matrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector Matrix::apply(const Vector& v) const {
    require_same_dim(cols_, v.dim(), "matrix apply");
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        double sum = 0.0;
        const double* row = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) sum += row[j] * v[j];
        out[i] = sum;
    }
    return out;
}

Vector Matrix::apply_transpose(const Vector& v) const {
    require_same_dim(rows_, v.dim(), "matrix apply_transpose");
    Vector out(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double vi = v[i];
        const double* row = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) out[j] += row[j] * vi;
    }
    return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "matrix add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "matrix subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

void Matrix::axpy(double s, const Matrix& other) {
    require_same_shape(*this, other, "matrix axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_dim(a.cols(), b.rows(), "matrix multiply");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    const auto av = a.values();
    const auto bv = b.values();
    return std::inner_product(av.begin(), av.end(), bv.begin(), 0.0);
}

double frobenius_norm(const Matrix& m) { return std::sqrt(frobenius_inner(m, m)); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

// ------------------------------------------------------- orthonormalize

OrthonormalBasis orthonormalize(std::span<const Vector> vs, double rank_tol) {
    OrthonormalBasis out;
    if (vs.empty()) return out;
    const std::size_t dim = vs.front().dim();
    double max_norm = 0.0;
    for (const Vector& v : vs) {
        require_same_dim(v.dim(), dim, "orthonormalize");
        max_norm = std::max(max_norm, norm(v));
    }
    if (max_norm == 0.0) return out;

    for (const Vector& v : vs) {
        Vector r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& q : out.q) r.axpy(-inner(q, r), q);
        const double rn = norm(r);
        if (rn <= rank_tol * max_norm) continue;
        r *= 1.0 / rn;
        out.q.push_back(std::move(r));
        if (out.q.size() == dim) break;
    }
    out.rank = out.q.size();
    return out;
}

Matrix projector(std::span<const Vector> q, std::size_t dim) {
    Matrix p(dim, dim);
    for (const Vector& v : q) {
        require_same_dim(v.dim(), dim, "projector");
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) p(i, j) += v[i] * v[j];
    }
    return p;
}

// ------------------------------------------------------ power iteration

namespace {

struct EigenPair {
    double value = 0.0;
    Vector vector;
    int iterations = 0;
};

// Dominant eigenpair of a symmetric matrix. Repeated normalized squaring
// of A drives it towards the projector onto the dominant eigenspace, which
// seeds the power method; the power method on A then polishes the pair
// until the residual ||A v - rho v|| is at round-off level.
EigenPair dominant_eigenpair(const Matrix& a, double tol, int max_iterations) {
    const std::size_t n = a.rows();
    EigenPair out;
    out.vector = Vector::unit(n, 0);

    const double scale = frobenius_norm(a);
    if (scale == 0.0) return out;
    if (n == 1) {
        out.value = a(0, 0);
        return out;
    }

    Matrix s = (1.0 / scale) * a;
    for (int k = 0; k < 64; ++k) {
        Matrix t = s * s;
        const double tn = frobenius_norm(t);
        if (tn == 0.0 || !std::isfinite(tn)) break;
        t *= 1.0 / tn;
        const double change = max_abs_diff(t, s);
        s = std::move(t);
        ++out.iterations;
        if (change < 1e-15) break;
    }

    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double cn = norm(s.column(j));
        if (cn > best_norm) {
            best_norm = cn;
            best = j;
        }
    }
    Vector v = best_norm > 0.0 ? s.column(best) : Vector::unit(n, 0);
    v *= 1.0 / norm(v);

    const double target = 1e-14 * scale;
    double residual = 0.0;
    double rho = 0.0;
    for (int it = 0; it <= max_iterations; ++it) {
        Vector w = a.apply(v);
        rho = inner(v, w);
        Vector r = w;
        r.axpy(-rho, v);
        residual = norm(r);
        if (residual <= target) break;
        const double wn = norm(w);
        if (wn == 0.0) break;
        v = std::move(w);
        v *= 1.0 / wn;
        ++out.iterations;
    }
    if (residual > target && residual > tol * std::max(1.0, std::sqrt(scale))) {
        throw SolverError("power iteration did not converge (residual " +
                              std::to_string(residual) + ")",
                          rho - residual, rho + residual);
    }
    out.value = rho;
    out.vector = std::move(v);
    return out;
}

Matrix gram_of_columns(const Matrix& m) {
    const std::size_t n = m.cols();
    Matrix g(n, n);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t a = 0; a < n; ++a) {
            const double mia = m(i, a);
            if (mia == 0.0) continue;
            for (std::size_t b = a; b < n; ++b) g(a, b) += mia * m(i, b);
        }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
    return g;
}

}  // namespace

SingularValues singular_value_decomposition(const Matrix& m, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw InputError("singular_values: tol must be positive");
    if (!m.all_finite()) throw InputError("singular_values: non-finite entries");

    SingularValues out;
    const std::size_t count = std::min(m.rows(), m.cols());
    Matrix a = gram_of_columns(m);
    for (std::size_t i = 0; i < count; ++i) {
        EigenPair p = dominant_eigenpair(a, tol, max_iterations);
        out.iterations += p.iterations;
        const double lambda = std::max(p.value, 0.0);
        out.values.push_back(std::sqrt(lambda));
        a.axpy(-p.value, Matrix::outer(p.vector, p.vector));
        out.right_vectors.push_back(std::move(p.vector));
    }

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return out.values[x] > out.values[y]; });
    SingularValues sorted;
    sorted.iterations = out.iterations;
    for (std::size_t idx : order) {
        sorted.values.push_back(out.values[idx]);
        sorted.right_vectors.push_back(out.right_vectors[idx]);
    }
    return sorted;
}

std::vector<double> singular_values(const Matrix& m, double tol) {
    return singular_value_decomposition(m, tol).values;
}

SingularTriplet top_singular_triplet(const Matrix& m, double tol) {
    SingularTriplet t;
    const Matrix a = gram_of_columns(m);
    EigenPair p = dominant_eigenpair(a, tol, 5000);
    Vector mv = m.apply(p.vector);
    t.sigma = norm(mv);
    if (t.sigma > 0.0) {
        mv *= 1.0 / t.sigma;
        t.left = std::move(mv);
    } else {
        t.left = Vector::unit(m.rows(), 0);
    }
    t.right = std::move(p.vector);
    return t;
}

double spectral_norm(const Matrix& m, double tol) { return top_singular_triplet(m, tol).sigma; }

// ------------------------------------------------------------- Cholesky

namespace {

Matrix cholesky_factor(const Matrix& s) {
    if (!s.square()) throw InputError("cholesky: matrix not square");
    const std::size_t n = s.rows();
    Matrix l(n, n);
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(s(i, i)));
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 1e-28 * diag_scale) || !(d > 0.0)) {
            throw SolverError("cholesky: matrix is not positive definite", d, d);
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    return l;
}

Vector cholesky_apply_inverse(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * y[k];
        y[i] = v / l(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x[k];
        x[ii] = v / l(ii, ii);
    }
    return x;
}

}  // namespace

Vector cholesky_solve(const Matrix& spd, const Vector& b) {
    require_same_dim(spd.rows(), b.dim(), "cholesky_solve");
    return cholesky_apply_inverse(cholesky_factor(spd), b);
}

Matrix spd_inverse(const Matrix& spd) {
    const Matrix l = cholesky_factor(spd);
    const std::size_t n = spd.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vector col = cholesky_apply_inverse(l, Vector::unit(n, j));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double avg = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = avg;
            inv(j, i) = avg;
        }
    return inv;
}

}  // namespace orbit
