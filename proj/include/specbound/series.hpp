#ifndef SPECBOUND_SERIES_HPP
#define SPECBOUND_SERIES_HPP

// Summation engine for the hypergeometric-type series used throughout.
//
// Every series here is a Pochhammer quotient,
//
//     t(n) = prefactor * (p + q n) * prod (a_i)_n / prod (b_j)_n,
//
// decaying like n^{-s} with s = sum b_j - sum a_i (-1 if q != 0) known in
// closed form. For s barely above 1 (theta near 0) direct summation is
// hopeless, so the tail is completed by Euler-Maclaurin:
//
//     sum_{n>=N0} t(n) = I + t(N0)/2 - t'(N0)/12 + t'''(N0)/720 - ...
//
// with I = int_{N0}^inf t(x) dx evaluated after the substitution x = N0/s,
// which turns it into int_0^1 s^{g-1} w(s) ds, g = s - 1. The factor w is
// smooth with variation scale N0, so a small Gauss-Jacobi rule for the
// weight s^{g-1} integrates it to machine precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "specbound/gammafn.hpp"

namespace specbound {

/// Truncation policy shared by all infinite series evaluations.
struct SeriesControl {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_terms = 100000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_terms < 1)
            throw std::invalid_argument("SeriesControl: rel_tol, abs_tol > 0 and max_terms >= 1 required");
    }
    double tolerance_for(double scale) const {
        return std::max(rel_tol * std::abs(scale), abs_tol);
    }
};

struct SeriesResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int terms_used = 0;
    bool converged = false;
};

/// Reported instead of a silent truncation when a series cannot reach the
/// requested tolerance within SeriesControl::max_terms.
struct SeriesNonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace quadrule {

/// Nodes/weights for int_0^1 s^gamma f(s) ds, gamma > -1 (Gauss-Jacobi,
/// alpha = 0). Golub-Welsch on the symmetric tridiagonal recurrence matrix,
/// eigenvalues by implicit-shift QL.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix,
// accumulating only the first row of the eigenvector matrix (all Golub-Welsch
// needs). d = diagonal, e = subdiagonal (e[0] unused), q = first-row vector.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           std::vector<double>& q) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter == 60) throw std::runtime_error("gauss_jacobi: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = q[i + 1];
                    q[i + 1] = s * q[i] + c * f;
                    q[i] = c * q[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

inline Rule gauss_jacobi01(int n, double gamma) {
    if (!(gamma > -1.0)) throw std::domain_error("gauss_jacobi01: gamma must be > -1");
    // monic Jacobi recurrence on [-1,1] with weight (1+x)^gamma
    std::vector<double> d(n), e(n), q(n, 0.0);
    q[0] = 1.0;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + gamma;
        d[k] = (k == 0) ? gamma / (gamma + 2.0) : gamma * gamma / (s * (s + 2.0));
        if (k > 0) {
            const double b = 4.0 * k * k * (k + gamma) * (k + gamma) /
                             (s * s * (s + 1.0) * (s - 1.0));
            e[k] = std::sqrt(b);
        }
    }
    detail::tridiagonal_ql(d, e, q);
    // mu0 = int_{-1}^1 (1+x)^gamma dx = 2^{gamma+1}/(gamma+1); map to [0,1]
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    for (int i = 0; i < n; ++i) {
        const std::size_t j = order[i];
        rule.nodes[i] = 0.5 * (d[j] + 1.0);
        rule.weights[i] = q[j] * q[j] / (gamma + 1.0);  // 2^{-gamma-1} * mu0 * q^2
    }
    return rule;
}

/// Gauss-Legendre on [0,1] (the gamma = 0 special case), used by the disk
/// quadratures as well.
inline Rule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0); }

}  // namespace quadrule

/// One hypergeometric-type series: prefactor * (p + q n) * prod (a)_n / prod (b)_n,
/// summed from n = start_index.
struct PochhammerSeries {
    std::vector<double> num;
    std::vector<double> den;
    double prefactor = 1.0;
    double affine_p = 1.0;
    double affine_q = 0.0;
    int start_index = 0;

    double decay_exponent() const {
        double s = 0.0;
        for (double b : den) s += b;
        for (double a : num) s -= a;
        if (affine_q != 0.0) s -= 1.0;
        return s;
    }

    /// true when some numerator base is a nonpositive integer: the series
    /// terminates and is summed exactly.
    bool terminating() const {
        for (double a : num)
            if (is_nonpositive_integer(a)) return true;
        return false;
    }
};

namespace detail {

struct LogTermEvaluator {
    const PochhammerSeries& s;
    double log_ref;  // sum log|Gamma(a_i)| - sum log|Gamma(b_j)|
    int sign_ref;

    explicit LogTermEvaluator(const PochhammerSeries& ps) : s(ps) {
        if (s.num.size() != s.den.size())
            throw std::invalid_argument("PochhammerSeries: num/den must have equal length");
        log_ref = 0.0;
        sign_ref = 1;
        for (double a : s.num) {
            const auto [lg, sg] = log_abs_gamma(a);
            log_ref += lg;
            sign_ref *= sg;
        }
        for (double b : s.den) {
            const auto [lg, sg] = log_abs_gamma(b);
            log_ref -= lg;
            sign_ref *= sg;
        }
    }

    // log of the Gamma-quotient part of t(x), assembled pairwise so that the
    // large (x ln x) pieces cancel analytically rather than in floating point
    double log_quotient(double x) const {
        double lg = -log_ref;
        for (std::size_t i = 0; i < s.num.size(); ++i)
            lg += log_gamma_diff(x + s.den[i], s.num[i] - s.den[i]);
        return lg;
    }

    // t(x) for continuous x >= ~40 with x + base > 0 for every base
    double term(double x) const {
        return s.prefactor * sign_ref * (s.affine_p + s.affine_q * x) * std::exp(log_quotient(x));
    }

    // first and third logarithmic derivative pieces
    double l1(double x) const {
        double v = 0.0;
        for (double a : s.num) v += digamma(x + a);
        for (double b : s.den) v -= digamma(x + b);
        if (s.affine_q != 0.0) v += s.affine_q / (s.affine_p + s.affine_q * x);
        return v;
    }
    double l2(double x) const {
        double v = 0.0;
        for (double a : s.num) v += trigamma(x + a);
        for (double b : s.den) v -= trigamma(x + b);
        if (s.affine_q != 0.0) {
            const double r = s.affine_q / (s.affine_p + s.affine_q * x);
            v -= r * r;
        }
        return v;
    }
    double l3(double x) const {
        double v = 0.0;
        for (double a : s.num) v += tetragamma(x + a);
        for (double b : s.den) v -= tetragamma(x + b);
        if (s.affine_q != 0.0) {
            const double r = s.affine_q / (s.affine_p + s.affine_q * x);
            v += 2.0 * r * r * r;
        }
        return v;
    }
};

}  // namespace detail

/// Sum a PochhammerSeries under the given control. Direct partial sum to N0
/// terms plus the Euler-Maclaurin tail; N0 is escalated until the estimated
/// truncation error meets the tolerance or max_terms is exhausted, in which
/// case the result reports converged = false (the value is still the best
/// available, with its honest error estimate).
inline SeriesResult sum_series(const PochhammerSeries& ps, const SeriesControl& ctl) {
    ctl.validate();

    // terminating series: exact finite sum
    if (ps.terminating()) {
        int stop = 0;
        for (double a : ps.num)
            if (is_nonpositive_integer(a)) stop = std::max(stop, static_cast<int>(std::lround(-a)) + 1);
        double u = 1.0, sum = 0.0;
        for (int n = 0; n < stop; ++n) {
            if (n >= ps.start_index) sum += ps.prefactor * (ps.affine_p + ps.affine_q * n) * u;
            double f = 1.0;
            for (double a : ps.num) f *= n + a;
            for (double b : ps.den) f /= n + b;
            u *= f;
        }
        return {sum, 0.0, stop, true};
    }

    const double s_decay = ps.decay_exponent();
    if (!(s_decay > 1.0))
        throw SeriesNonConvergence("sum_series: series parameters give a divergent series");
    const double g = s_decay - 1.0;

    detail::LogTermEvaluator ev(ps);

    double min_base = 0.0;
    for (double a : ps.num) min_base = std::min(min_base, a);
    for (double b : ps.den) min_base = std::min(min_base, b);

    int n0 = std::max({48, static_cast<int>(std::ceil(-2.0 * min_base)) + 16,
                       static_cast<int>(std::ceil(2.0 * g)) + 16});
    const auto rule = quadrule::gauss_jacobi01(24, g - 1.0);

    SeriesResult res;
    while (true) {
        // direct part with a running product (no Gamma evaluations)
        double u = 1.0, sum = 0.0;
        for (int n = 0; n < n0; ++n) {
            if (n >= ps.start_index) sum += ps.prefactor * (ps.affine_p + ps.affine_q * n) * u;
            double f = 1.0;
            for (double a : ps.num) f *= n + a;
            for (double b : ps.den) f /= n + b;
            u *= f;
        }

        // tail integral: N0 * int_0^1 s^{g-1} w(s) ds, w(s) = t(N0/s) s^{-1-g}
        const double x0 = static_cast<double>(n0);
        double integral = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = rule.nodes[i];
            const double x = x0 / s;
            const double lg = ev.log_quotient(x) - (1.0 + g) * std::log(s);
            integral += rule.weights[i] * (ps.affine_p + ps.affine_q * x) * std::exp(lg);
        }
        integral *= ps.prefactor * ev.sign_ref * x0;

        const double t0 = ev.term(x0);
        const double l1 = ev.l1(x0), l2 = ev.l2(x0), l3 = ev.l3(x0);
        const double b2_term = -t0 * l1 / 12.0;
        const double b4_term = t0 * (l1 * l1 * l1 + 3.0 * l1 * l2 + l3) / 720.0;
        const double tail = integral + 0.5 * t0 + b2_term + b4_term;

        res.value = sum + tail;
        res.terms_used = n0;
        res.error_estimate = 4.0 * std::abs(b4_term) +
                             std::numeric_limits<double>::epsilon() * (std::abs(sum) + std::abs(tail));
        const double tol = ctl.tolerance_for(res.value);
        if (res.error_estimate <= tol) {
            res.converged = true;
            return res;
        }
        if (2 * n0 > ctl.max_terms) {
            res.converged = false;
            return res;
        }
        n0 *= 2;
    }
}

/// Convenience: sum and throw on non-convergence.
inline double sum_series_strict(const PochhammerSeries& ps, const SeriesControl& ctl) {
    const SeriesResult r = sum_series(ps, ctl);
    if (!r.converged)
        throw SeriesNonConvergence("series did not reach tolerance within max_terms");
    return r.value;
}

/// Plain power series sum_{n} c_n x^n for |x| < 1 with geometrically decaying
/// terms, used by the finite-argument hypergeometric evaluations. term_ratio
/// maps n to t_{n+1}/t_n.
template <typename RatioFn>
SeriesResult sum_power_series(double first_term, RatioFn term_ratio, const SeriesControl& ctl) {
    ctl.validate();
    double t = first_term, sum = 0.0;
    for (int n = 0; n < ctl.max_terms; ++n) {
        sum += t;
        const double ratio = term_ratio(n);
        t *= ratio;
        const double abs_r = std::abs(ratio);
        if (abs_r < 1.0) {
            const double tail_bound = std::abs(t) / (1.0 - abs_r);
            if (tail_bound <= ctl.tolerance_for(sum)) return {sum, tail_bound, n + 1, true};
        }
    }
    return {sum, std::abs(t), ctl.max_terms, false};
}

}  // namespace specbound

#endif  // SPECBOUND_SERIES_HPP
