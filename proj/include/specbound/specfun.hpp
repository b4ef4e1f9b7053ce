#ifndef SPECBOUND_SPECFUN_HPP
#define SPECBOUND_SPECFUN_HPP

// Closed-form and series constants of the bound machinery: the Gauss value
// 2F1(a,b;c;1), the diagonal reproducing constant sigma(alpha,beta), the
// projected-term constant kappa(alpha,theta) in both its defining-series and
// 4F3 representations, and the one-term right-hand-side constant K(beta,theta).

#include <cmath>
#include <stdexcept>

#include "specbound/gammafn.hpp"
#include "specbound/series.hpp"

namespace specbound::specfun {

/// 2F1(a,b;c;1) by the Gauss identity Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)).
/// Requires c - a - b > 0 and c not a nonpositive integer.
inline double hyp2f1_at_1(double a, double b, double c) {
    if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1_at_1: c is a nonpositive integer (pole)");
    if (!(c - a - b > 0.0)) throw std::domain_error("hyp2f1_at_1: divergent, needs c - a - b > 0");
    if (a == 0.0 || b == 0.0) return 1.0;
    // a zero of 1/Gamma(c-a) or 1/Gamma(c-b) makes the value vanish
    if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) return 0.0;
    const auto [l1, s1] = log_abs_gamma(c);
    const auto [l2, s2] = log_abs_gamma(c - a - b);
    const auto [l3, s3] = log_abs_gamma(c - a);
    const auto [l4, s4] = log_abs_gamma(c - b);
    return (s1 * s2 * s3 * s4) * std::exp(l1 + l2 - l3 - l4);
}

/// Companion evaluator summing the defining series directly under ctl.
/// Used by tests as the independent check of the closed form.
inline SeriesResult hyp2f1_series_at_1(double a, double b, double c, const SeriesControl& ctl) {
    if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1_series_at_1: pole in c");
    if (!(c - a - b > 0.0) && !(is_nonpositive_integer(a) || is_nonpositive_integer(b)))
        throw std::domain_error("hyp2f1_series_at_1: divergent series");
    PochhammerSeries ps;
    ps.num = {a, b};
    ps.den = {c, 1.0};
    return sum_series(ps, ctl);
}

/// 2F1(a,b;c;x) for |x| < 1 by direct summation (geometric tail control).
inline double hyp2f1(double a, double b, double c, double x, const SeriesControl& ctl) {
    if (std::abs(x) >= 1.0) throw std::domain_error("hyp2f1: |x| < 1 required");
    if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1: pole in c");
    const auto res = sum_power_series(
        1.0,
        [=](int n) { return (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x; }, ctl);
    if (!res.converged) throw SeriesNonConvergence("hyp2f1: did not converge");
    return res.value;
}

/// sigma(alpha,beta): 1/sigma = (1/(1+beta)) G(a+2) G(a+2b+3) / (G(a+b+2) G(a+b+3)).
inline double sigma(double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::domain_error("sigma: needs alpha > -1 and beta > -1");
    const double inv = gamma_ratio22(alpha + 2.0, alpha + 2.0 * beta + 3.0,
                                     alpha + beta + 2.0, alpha + beta + 3.0) /
                       (1.0 + beta);
    return 1.0 / inv;
}

enum class KappaMethod { series, hyp4f3 };

/// kappa(alpha,theta): the constant of the projected-term norm. Valid for
/// 0 < theta <= 1 and alpha - 2 theta + 1 > 0; exactly 0 at theta = 1.
///
/// series: sums the defining expansion
///   pref * sum_N (alpha+3-2theta+2N) (1-th)_N (2-th)_N [(a+2-2th)_N]^2
///                / ((a+2-th)_N (a+3-th)_N [(N+1)!]^2)
/// hyp4f3: evaluates the equivalent split into two 4F3 values at unity, with
/// the first one summed as (1 - F1) from n = 1 to dodge cancellation.
inline double kappa(double alpha, double theta, const SeriesControl& ctl,
                    KappaMethod method = KappaMethod::series) {
    if (!(theta > 0.0) || !(theta <= 1.0)) throw std::domain_error("kappa: theta in (0,1] required");
    if (!(alpha - 2.0 * theta + 1.0 > 0.0))
        throw std::domain_error("kappa: needs alpha - 2 theta + 1 > 0");
    if (theta == 1.0) return 0.0;

    const double pref = (1.0 - theta) * gamma_ratio22(alpha + 2.0, alpha + 2.0 - 2.0 * theta,
                                                      alpha + 2.0 - theta, alpha + 3.0 - theta);
    if (method == KappaMethod::series) {
        PochhammerSeries ps;
        ps.num = {1.0 - theta, 2.0 - theta, alpha + 2.0 - 2.0 * theta, alpha + 2.0 - 2.0 * theta};
        ps.den = {alpha + 2.0 - theta, alpha + 3.0 - theta, 2.0, 2.0};
        ps.affine_p = alpha + 3.0 - 2.0 * theta;
        ps.affine_q = 2.0;
        ps.prefactor = pref;
        return sum_series_strict(ps, ctl);
    }

    const double km = (alpha + 1.0 - theta) * (alpha + 2.0 - theta) /
                      (theta * (1.0 - theta) * (alpha + 1.0 - 2.0 * theta));
    // 1 - 4F3(-th, 1-th, a-2th+1, a-2th+2; 1, a-th+1, a-th+2; 1), summed from n=1
    PochhammerSeries f1m;
    f1m.num = {-theta, 1.0 - theta, alpha - 2.0 * theta + 1.0, alpha - 2.0 * theta + 2.0};
    f1m.den = {1.0, alpha - theta + 1.0, alpha - theta + 2.0, 1.0};
    f1m.prefactor = -1.0;  // so the sum equals 1 - F1 directly
    f1m.start_index = 1;
    const double one_minus_f1 = sum_series_strict(f1m, ctl);

    PochhammerSeries f2;
    f2.num = {1.0 - theta, 2.0 - theta, alpha - 2.0 * theta + 2.0, alpha - 2.0 * theta + 2.0};
    f2.den = {2.0, alpha - theta + 2.0, alpha - theta + 3.0, 1.0};
    const double f2v = sum_series_strict(f2, ctl);

    return pref * (km * one_minus_f1 + f2v);
}

/// K(beta,theta) = (beta+2theta) G(2theta+1) / (2 theta beta [G(theta+1)]^2)
///                 + kappa(beta + 2 theta - 1, theta), for beta > 0.
/// theta = 1 is an exact branch: kappa vanishes and K = (beta+2)/beta.
inline double K_bound(double beta, double theta, const SeriesControl& ctl) {
    if (!(beta > 0.0)) throw std::domain_error("K_bound: beta > 0 required");
    if (!(theta > 0.0) || !(theta <= 1.0)) throw std::domain_error("K_bound: theta in (0,1] required");
    if (theta == 1.0) return (beta + 2.0) / beta;
    const double lead = (beta + 2.0 * theta) *
                        std::exp(log_gamma(2.0 * theta + 1.0) - 2.0 * log_gamma(theta + 1.0)) /
                        (2.0 * theta * beta);
    return lead + kappa(beta + 2.0 * theta - 1.0, theta, ctl);
}

}  // namespace specbound::specfun

#endif  // SPECBOUND_SPECFUN_HPP
