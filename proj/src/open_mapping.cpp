#include "orbit/open_mapping.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "orbit/errors.hpp"

namespace orbit {

std::string Decomposition::outcome_name() const {
    if (member()) return "Member";
    if (witness()) return "Witness";
    return "Undecided";
}

Decomposition greedy_decompose(const Vector& y, const LocatedSet& c, double r, int max_steps,
                               const DecomposeOptions& options) {
    if (max_steps < 1) throw InputError("greedy_decompose: max_steps must be at least 1");
    if (y.dim() != c.ambient_dim()) throw InputError("greedy_decompose: dimension mismatch");
    if (!std::isfinite(r) || !(r > norm(y)))
        throw InputError("greedy_decompose: need r > ||y|| (r = " + std::to_string(r) +
                         ", ||y|| = " + std::to_string(norm(y)) + ")");

    Decomposition dec;
    dec.r = r;
    dec.y = y;
    dec.oracle_tol = options.oracle_tol;
    const double witness_floor = std::max(0.25 * r, 10.0 * options.oracle_tol);

    Vector z = y;
    Vector partial(y.dim());
    for (int i = 1; i <= max_steps; ++i) {
        LocatedSet::Nearest near = c.locate(z, options.oracle_tol);
        // The two branches overlap on (r/4, r/2); continuing is always safe.
        if (!(near.dist < 0.5 * r) && near.dist > witness_floor) {
            dec.steps.push_back({i, Vector(y.dim()), 1, norm(z)});
            dec.outcome = Decomposition::Witness{z, near.dist};
            return dec;
        }
        Vector x = 2.0 * near.point;
        z *= 2.0;
        z -= x;
        const double scale = std::ldexp(1.0, -i);
        partial.axpy(scale, x);
        const double residual = norm(z);
        dec.steps.push_back({i, std::move(x), 0, residual});
        if (scale * residual <= options.out_tol) {
            dec.outcome = Decomposition::Member{partial};
            return dec;
        }
    }
    dec.outcome = Decomposition::Undecided{std::ldexp(norm(z), -max_steps)};
    return dec;
}

// ----------------------------------------------------------- inner radius

namespace {

double radical_inverse(std::size_t index, unsigned base) {
    double f = 1.0;
    double value = 0.0;
    while (index > 0) {
        f /= base;
        value += f * static_cast<double>(index % base);
        index /= base;
    }
    return value;
}

std::vector<unsigned> first_primes(std::size_t count) {
    std::vector<unsigned> primes;
    for (unsigned p = 2; primes.size() < count; ++p) {
        bool prime = true;
        for (unsigned q : primes) {
            if (q * q > p) break;
            if (p % q == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(p);
    }
    return primes;
}

Vector normalized(Vector u) {
    const double n = norm(u);
    u *= 1.0 / n;
    return u;
}

std::vector<Vector> sample_directions(std::size_t d, std::size_t per_dim) {
    std::vector<Vector> us;
    if (d == 1) {
        us.push_back(Vector{1.0});
    } else if (d == 2) {
        const std::size_t count = 2 * per_dim;
        for (std::size_t j = 0; j < count; ++j) {
            const double theta = std::numbers::pi * static_cast<double>(j) /
                                 static_cast<double>(count);
            us.push_back(Vector{std::cos(theta), std::sin(theta)});
        }
    } else {
        for (std::size_t j = 0; j < d; ++j) us.push_back(Vector::unit(d, j));
        const std::vector<unsigned> primes = first_primes(d);
        const std::size_t count = per_dim * d;
        for (std::size_t i = 1; us.size() < count + d; ++i) {
            Vector u(d);
            for (std::size_t j = 0; j < d; ++j) u[j] = 2.0 * radical_inverse(i, primes[j]) - 1.0;
            if (norm(u) < 1e-3) continue;
            us.push_back(normalized(std::move(u)));
        }
    }
    return us;
}

struct DirectionScan {
    const LocatedSet& c;
    const std::vector<Vector>& q;
    double tol;

    Vector embed(const Vector& u) const {
        Vector w(c.ambient_dim());
        for (std::size_t j = 0; j < q.size(); ++j) w.axpy(u[j], q[j]);
        return w;
    }
    double gauge(const Vector& u) const { return c.gauge(embed(u), tol); }
};

// Larger gauge wins; exact ties go to the lexicographically smaller direction.
bool worse(double ga, const Vector& wa, double gb, const Vector& wb) {
    if (ga != gb) return ga > gb;
    return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
}

std::vector<double> scan_gauges(const DirectionScan& scan, const std::vector<Vector>& us,
                                Exec exec) {
    std::vector<double> g(us.size());
    std::vector<std::exception_ptr> errors(us.size());
    const auto count = static_cast<std::ptrdiff_t>(us.size());
    const auto body = [&](std::ptrdiff_t i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            g[idx] = scan.gauge(us[idx]);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return g;
}

struct Best {
    Vector u;
    Vector w;
    double g = 0.0;
};

void refine_circle(const DirectionScan& scan, Best& best, double half_width) {
    const double centre = std::atan2(best.u[1], best.u[0]);
    const auto at = [](double t) { return Vector{std::cos(t), std::sin(t)}; };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = centre - half_width;
    double b = centre + half_width;
    double t1 = b - phi * (b - a);
    double t2 = a + phi * (b - a);
    double g1 = scan.gauge(at(t1));
    double g2 = scan.gauge(at(t2));
    for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
        if (g1 >= g2) {
            b = t2;
            t2 = t1;
            g2 = g1;
            t1 = b - phi * (b - a);
            g1 = scan.gauge(at(t1));
        } else {
            a = t1;
            t1 = t2;
            g1 = g2;
            t2 = a + phi * (b - a);
            g2 = scan.gauge(at(t2));
        }
    }
    const double t = g1 >= g2 ? t1 : t2;
    const double g = std::max(g1, g2);
    if (g > best.g) {
        best.u = at(t);
        best.w = scan.embed(best.u);
        best.g = g;
    }
}

void refine_pattern(const DirectionScan& scan, Best& best, double step, double min_step) {
    const std::size_t d = best.u.dim();
    for (int evals = 0; step > min_step && evals < 20'000;) {
        bool improved = false;
        for (std::size_t j = 0; j < d && !improved; ++j)
            for (double s : {step, -step}) {
                Vector u = best.u;
                u[j] += s;
                u = normalized(std::move(u));
                const double g = scan.gauge(u);
                ++evals;
                if (g > best.g) {
                    best.u = std::move(u);
                    best.g = g;
                    improved = true;
                    break;
                }
            }
        if (!improved) step *= 0.5;
    }
    best.w = scan.embed(best.u);
}

}  // namespace

RadiusResult inner_radius(const LocatedSet& c, const std::vector<Vector>& w_basis, double tol,
                          const RadiusOptions& options) {
    if (!(tol > 0.0)) throw InputError("inner_radius: tol must be positive");
    if (options.directions_per_dim == 0)
        throw InputError("inner_radius: directions_per_dim must be positive");
    for (const Vector& b : w_basis)
        if (b.dim() != c.ambient_dim()) throw InputError("inner_radius: basis dimension mismatch");
    const OrthonormalBasis ob = orthonormalize(w_basis, kDefaultRankTol);
    if (ob.rank == 0) throw InputError("inner_radius: W = span(W_basis) is zero-dimensional");

    const std::size_t d = ob.rank;
    const DirectionScan scan{c, ob.q, tol};
    const std::vector<Vector> us = sample_directions(d, options.directions_per_dim);
    const std::vector<double> g = scan_gauges(scan, us, options.exec);

    Best best{us[0], scan.embed(us[0]), g[0]};
    for (std::size_t i = 1; i < us.size(); ++i) {
        Vector w = scan.embed(us[i]);
        if (worse(g[i], w, best.g, best.w)) best = {us[i], std::move(w), g[i]};
    }

    RadiusResult res;
    res.tol = tol;
    res.directions_checked = us.size();
    if (best.g == kInfiniteGauge) {
        res.r = 0.0;
        res.direction = best.w;
        res.worst_gauge = kInfiniteGauge;
        res.method = "direction-scan (unbounded gauge)";
        return res;
    }
    if (!(best.g > 0.0)) throw InputError("inner_radius: body is unbounded along W");

    if (d == 1) {
        res.method = "axis";
    } else if (d == 2) {
        refine_circle(scan, best, std::numbers::pi / static_cast<double>(us.size()));
        res.method = "half-circle scan + golden section";
    } else {
        const double spacing =
            std::pow(static_cast<double>(us.size()), -1.0 / static_cast<double>(d - 1));
        refine_pattern(scan, best, spacing, 1e-3 * tol);
        res.method = "Halton sphere scan + pattern search";
    }

    res.worst_gauge = best.g;
    res.r = 1.0 / best.g;
    res.direction = best.w;

    DecomposeOptions dopt;
    dopt.oracle_tol = std::min(1e-10, 1e-3 * tol * res.r);
    const Vector probe = res.r * (1.0 - tol) * res.direction;
    res.certified = greedy_decompose(probe, c, res.r, 64, dopt).member();
    return res;
}

RadiusResult open_map_radius(const Matrix& t, double tol, const RadiusOptions& options,
                             double rank_tol) {
    if (t.rows() == 0 || t.cols() == 0) throw InputError("open_map_radius: empty matrix");
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < t.rows(); ++i) rows.push_back(t.row(i));
    const std::size_t rank = orthonormalize(rows, rank_tol).rank;
    if (rank < t.rows())
        throw InputError("open_map_radius: map is not onto, row rank " + std::to_string(rank) +
                         " < " + std::to_string(t.rows()));
    const MatrixImageSet image(t, rank_tol);
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < t.rows(); ++i) basis.push_back(Vector::unit(t.rows(), i));
    return inner_radius(image, basis, tol, options);
}

}  // namespace orbit
