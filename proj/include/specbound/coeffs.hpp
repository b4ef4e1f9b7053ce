#ifndef SPECBOUND_COEFFS_HPP
#define SPECBOUND_COEFFS_HPP

// Numeric coefficient layer between the exact form algebra and the convex
// criteria: the b_N / a_{k,N} constants, the one-term margin, the assembly of
// inequality rows N = 0,1,2 applied to g = (phi')^{tau/2}, their reduction to
// the canonical function basis, and the A_1..A_5 coefficient functions.
//
// Basis identities used by the reduction (g = g_lambda, lambda = tau/2):
//   g^(k)               = Omega_k g
//   d[(phi''/phi')^2 g] = [2 phi''phi'''/phi'^2 + (lambda-2)(phi''/phi')^3] g
// which make the monomial-to-basis system triangular; it is singular only
// at lambda = 0.

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "specbound/gammafn.hpp"
#include "specbound/phiforms.hpp"
#include "specbound/series.hpp"
#include "specbound/specfun.hpp"

namespace specbound::coeffs {

using cplx = std::complex<double>;

/// b_N = (-1)^{N+1} (1-theta)_{N+1} / ((N+1)! (alpha-2theta+N+2)_{N+1})
inline double b_coeff(int N, double alpha, double theta) {
    if (N < 0) throw std::domain_error("b_coeff: N >= 0 required");
    if (!(alpha > 2.0 * theta - 1.0)) throw std::domain_error("b_coeff: alpha > 2 theta - 1 required");
    const double sign = (N % 2 == 0) ? -1.0 : 1.0;
    return sign * pochhammer(1.0 - theta, N + 1) /
           (pochhammer(1.0, N + 1) * pochhammer(alpha - 2.0 * theta + N + 2.0, N + 1));
}

/// The general-weight coefficients of the diagonal expansion,
/// a_{k,N} = (-1)^{N-k}/(k!(N-k)!) (beta+k+2)_{N-k} / (alpha+2beta+N+k+3)_{N-k}.
inline double a_coeff_general(int k, int N, double alpha, double beta) {
    if (k < 0 || k > N) throw std::domain_error("a_coeff: 0 <= k <= N required");
    const double sign = ((N - k) % 2 == 0) ? 1.0 : -1.0;
    return sign / (pochhammer(1.0, k) * pochhammer(1.0, N - k)) *
           pochhammer(beta + k + 2.0, N - k) /
           pochhammer(alpha + 2.0 * beta + N + k + 3.0, N - k);
}

/// Specialization to the weight beta = -theta used by the main inequality.
inline double a_coeff(int k, int N, double alpha, double theta) {
    if (!(alpha > 2.0 * theta - 1.0)) throw std::domain_error("a_coeff: alpha > 2 theta - 1 required");
    return a_coeff_general(k, N, alpha, -theta);
}

/// (1-theta)(beta+1)(beta+2) G(b+2th+1)G(b+2)/(G(b+th+1)G(b+th+2)) |1/(b+1) - 1/tau|^2,
/// the right-hand side of the one-term criterion.
inline double one_term_rhs(cplx tau, double beta, double theta) {
    const double g = gamma_ratio22(beta + 2.0 * theta + 1.0, beta + 2.0,
                                   beta + theta + 1.0, beta + theta + 2.0);
    const double d = std::norm(1.0 / (beta + 1.0) - 1.0 / tau);
    return (1.0 - theta) * (beta + 1.0) * (beta + 2.0) * g * d;
}

/// RHS - LHS of the one-term condition; positive margin means the criterion
/// holds at (tau, beta, theta). Vanishing (1-theta) forces it nonpositive as
/// theta -> 1.
inline double one_term_margin(cplx tau, double beta, double theta, const SeriesControl& ctl) {
    if (tau == cplx(0.0)) throw std::domain_error("one_term_margin: tau != 0 required");
    if (!(beta > 0.0)) throw std::domain_error("one_term_margin: beta > 0 required");
    if (!(theta > 0.0) || !(theta <= 1.0))
        throw std::domain_error("one_term_margin: theta in (0,1] required");
    return one_term_rhs(tau, beta, theta) - specfun::K_bound(beta, theta, ctl);
}

/// A phi-form with plain complex coefficients, the numeric shadow of
/// forms::PhiForm once theta and lambda are fixed.
using NumericForm = std::map<forms::Monomial, cplx>;

inline void add_term(NumericForm& f, const forms::Monomial& m, cplx c) {
    if (c == cplx(0.0)) return;
    auto [it, inserted] = f.emplace(m, c);
    if (!inserted) it->second += c;
}

inline NumericForm eval_at(const forms::PhiForm& f, double param) {
    NumericForm out;
    for (const auto& [m, c] : f.terms()) add_term(out, m, c.eval(param));
    return out;
}

inline NumericForm differentiate(const NumericForm& f) {
    NumericForm out;
    for (const auto& [m, c] : f) {
        for (std::size_t i = 0; i < m.orders.size(); ++i) {
            if (i > 0 && m.orders[i] == m.orders[i - 1]) continue;
            const int mult =
                static_cast<int>(std::count(m.orders.begin(), m.orders.end(), m.orders[i]));
            std::vector<int> js = m.orders;
            js[i] += 1;
            add_term(out, forms::Monomial::of(std::move(js)), c * double(mult));
        }
        std::vector<int> js = m.orders;
        js.push_back(1);
        add_term(out, forms::Monomial::of(std::move(js)), -double(m.bidegree()) * c);
    }
    return out;
}

/// The operator F -> F' + lambda (phi''/phi') F, so that d/dz [F g] = (DF) g.
inline NumericForm d_operator(const NumericForm& f, cplx lambda) {
    NumericForm out = differentiate(f);
    for (const auto& [m, c] : f) {
        std::vector<int> js = m.orders;
        js.push_back(1);
        add_term(out, forms::Monomial::of(std::move(js)), lambda * c);
    }
    return out;
}

/// One row of the main inequality at fixed parameters, applied to
/// g = (phi')^{tau/2}, together with its expansion over the canonical basis:
///   N = 0: { g' }
///   N = 1: { g'', (phi''/phi')^2 g }
///   N = 2: { g''', d[(phi''/phi')^2 g], (phi''/phi')^3 g }
struct InequalityRow {
    int N = 0;
    double weight = 0.0;                     // 1/sigma(alpha, N - theta)
    double b = 0.0;                          // b_N
    std::vector<double> a;                   // a_{0,N} .. a_{N,N}
    std::vector<forms::PhiForm> phi_terms;   // exact Phi_{k,theta}, k = 0..N
    NumericForm row;                         // full row as a numeric form (times g)
    std::vector<cplx> basis_coeffs;          // coefficients over the canonical basis
};

inline InequalityRow assemble_row(int N, cplx tau, double beta, double theta) {
    if (N < 0 || N > 2) throw std::domain_error("assemble_row: N in {0,1,2}");
    if (!(beta > 0.0)) throw std::domain_error("assemble_row: beta > 0 required");
    if (!(theta > 0.0) || !(theta <= 1.0))
        throw std::domain_error("assemble_row: theta in (0,1] required");
    if (N == 0 && theta == 1.0)
        throw std::domain_error("assemble_row: the N = 0 row is absent at theta = 1");
    const cplx lambda = tau / 2.0;
    if (lambda == cplx(0.0)) throw std::domain_error("assemble_row: tau = 0 makes the basis singular");
    const double alpha = beta + 2.0 * theta - 1.0;

    InequalityRow r;
    r.N = N;
    r.weight = 1.0 / specfun::sigma(alpha, N - theta);
    r.b = b_coeff(N, alpha, theta);
    for (int k = 0; k <= N; ++k) {
        r.a.push_back(a_coeff(k, N, alpha, theta));
        r.phi_terms.push_back(forms::phi_k_form(k));
    }

    // row = b_N Omega_{N+1} + sum_k a_{k,N} D^{N-k}[Phi_{k,theta}]
    NumericForm row;
    {
        const forms::PhiForm om = forms::omega_form(N + 1);
        for (const auto& [m, c] : om.terms()) add_term(row, m, r.b * c.eval(lambda));
    }
    for (int k = 0; k <= N; ++k) {
        NumericForm f = eval_at(r.phi_terms[k], theta);
        for (int d = 0; d < N - k; ++d) f = d_operator(f, lambda);
        for (const auto& [m, c] : f) add_term(row, m, r.a[k] * c);
    }
    r.row = row;

    const auto coeff = [&](const NumericForm& f, std::initializer_list<int> js) -> cplx {
        const auto it = f.find(forms::Monomial::of(js));
        return it == f.end() ? cplx(0.0) : it->second;
    };

    if (N == 0) {
        // row = C0 * Omega_1, Omega_1 = lambda (phi''/phi')
        r.basis_coeffs = {coeff(row, {1}) / lambda};
    } else if (N == 1) {
        const cplx om2_11 = lambda * (lambda - 1.0);
        const cplx c1 = coeff(row, {2}) / lambda;
        const cplx c2 = coeff(row, {1, 1}) - c1 * om2_11;
        r.basis_coeffs = {c1, c2};
    } else {
        const cplx om3_12 = 3.0 * lambda * (lambda - 1.0);
        const cplx om3_111 = lambda * (lambda - 1.0) * (lambda - 2.0);
        const cplx c3 = coeff(row, {3}) / lambda;
        const cplx c4 = (coeff(row, {1, 2}) - c3 * om3_12) / 2.0;
        const cplx c5 = coeff(row, {1, 1, 1}) - c3 * om3_111 - c4 * (lambda - 2.0);
        r.basis_coeffs = {c3, c4, c5};
    }
    return r;
}

/// The A coefficient functions of the two- and three-term criteria at one
/// theta. denominator_positive reports whether the last-condition holds (the
/// square roots are real); when false the value fields are meaningless and
/// the caller falls back to the one-term criterion.
struct ACoefficients {
    double theta = 0.0;
    bool denominator_positive = false;
    cplx a1{}, a2{};
    std::optional<cplx> a3, a4, a5;
};

inline ACoefficients A_coefficients(double theta, cplx tau, double beta, int order,
                                    const SeriesControl& ctl) {
    if (order != 2 && order != 3) throw std::domain_error("A_coefficients: order in {2,3}");
    ACoefficients out;
    out.theta = theta;
    const double K = specfun::K_bound(beta, theta, ctl);
    const double rhs1 = one_term_rhs(tau, beta, theta);
    const double denom = K - rhs1;
    if (!(denom > 0.0)) {
        out.denominator_positive = false;
        return out;
    }
    out.denominator_positive = true;
    const double s = 1.0 / std::sqrt(denom);

    const InequalityRow r1 = assemble_row(1, tau, beta, theta);
    const double w1 = std::sqrt(r1.weight);
    out.a1 = r1.basis_coeffs[0] * w1 * s;
    out.a2 = r1.basis_coeffs[1] * w1 * s;

    if (order == 3) {
        const InequalityRow r2 = assemble_row(2, tau, beta, theta);
        const double w2 = std::sqrt((beta + 5.0) * (beta + 6.0) * r2.weight);
        out.a3 = r2.basis_coeffs[0] * w2 * s;
        out.a4 = r2.basis_coeffs[1] * w2 * s;
        out.a5 = r2.basis_coeffs[2] * w2 * s;
    }
    return out;
}

/// A_1, A_2 evaluated literally from their printed closed forms; the
/// row-derived values above must reproduce these (tested, not used in the
/// computational path).
inline std::pair<cplx, cplx> a12_printed(double theta, cplx tau, double beta,
                                         const SeriesControl& ctl) {
    const double K = specfun::K_bound(beta, theta, ctl);
    const double rhs1 = one_term_rhs(tau, beta, theta);
    const double denom = K - rhs1;
    if (!(denom > 0.0)) throw std::domain_error("a12_printed: last-condition fails");
    const double W = (2.0 - theta) * gamma_ratio22(beta + 2.0 * theta + 1.0, beta + 4.0,
                                                   beta + theta + 2.0, beta + theta + 3.0);
    const double scale = std::sqrt(W / denom);
    const cplx bracket1 = (1.0 - theta) / (2.0 * (beta + 2.0) * (beta + 3.0)) -
                          (1.0 - theta) / (tau * (beta + 3.0)) + 1.0 / (3.0 * tau);
    const cplx bracket2 = (1.0 - tau / 2.0) / 6.0 - (theta + 1.0) / 8.0;
    return {bracket1 * scale, bracket2 * scale};
}

}  // namespace specbound::coeffs

#endif  // SPECBOUND_COEFFS_HPP
