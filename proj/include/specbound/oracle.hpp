#ifndef SPECBOUND_ORACLE_HPP
#define SPECBOUND_ORACLE_HPP

// Independent numerical verification on concrete conformal maps and
// coefficient sequences: the area-theorem integral and its two-variable
// form evaluated by quadrature on the disk, the coefficient expression of
// the weighted norm, and sigma(alpha,beta) as a double integral. Everything
// here is checking scaffolding: none of it feeds the bound computation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbound/gammafn.hpp"
#include "specbound/phiforms.hpp"
#include "specbound/series.hpp"
#include "specbound/specfun.hpp"

namespace specbound::oracle {

using cplx = std::complex<double>;

namespace detail {

/// exp(x) - 1 for complex x without cancellation near 0.
inline cplx cexpm1(cplx x) {
    if (std::abs(x) > 1e-4) return std::exp(x) - 1.0;
    return x * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0)));
}

/// log(1 + x) for complex x without cancellation near 0.
inline cplx clog1p(cplx x) {
    if (std::abs(x) > 1e-4) return std::log(1.0 + x);
    return x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - x / 4.0)));
}

}  // namespace detail

/// The map zoo: identity and (rotated) Koebe maps, with closed-form
/// derivatives and branch-correct logarithms. The branch of every power is
/// fixed by its value at the basepoint (0 or the diagonal), matching the
/// normalization phi(0) = 0, phi'(0) = 1.
struct MapSample {
    enum class Kind { identity, koebe };
    Kind kind = Kind::identity;
    cplx omega{1.0, 0.0};  // |omega| = 1 rotation; phi(z) = z/(1 - omega z)^2
    std::string name = "identity";

    static MapSample identity() { return {}; }
    static MapSample koebe() { return {Kind::koebe, {1.0, 0.0}, "koebe"}; }
    static MapSample rotated_koebe(double angle) {
        return {Kind::koebe, std::polar(1.0, angle), "koebe@" + std::to_string(angle)};
    }

    cplx phi(cplx z) const {
        if (kind == Kind::identity) return z;
        const cplx d = 1.0 - omega * z;
        return z / (d * d);
    }
    /// n-th derivative, n >= 1
    cplx dphi(int n, cplx z) const {
        if (kind == Kind::identity) return n == 1 ? cplx(1.0) : cplx(0.0);
        // kappa^(n)(u) = n! (n + u)(1-u)^{-n-2}; phi^(n)(z) = omega^{n-1} kappa^(n)(omega z)
        const cplx u = omega * z;
        const cplx r = pochhammer(1.0, n) * (double(n) + u) / std::pow(1.0 - u, double(n) + 2.0);
        return std::pow(omega, double(n - 1)) * r;
    }
    /// log phi'(z), the branch vanishing at z = 0
    cplx log_dphi(cplx z) const {
        if (kind == Kind::identity) return {0.0, 0.0};
        const cplx u = omega * z;
        return std::log(1.0 + u) - 3.0 * std::log(1.0 - u);
    }
    /// log(z / phi(z)), the branch vanishing at z = 0
    cplx log_z_over_phi(cplx z) const {
        if (kind == Kind::identity) return {0.0, 0.0};
        return 2.0 * std::log(1.0 - omega * z);
    }
    /// log of (phi(z)-phi(w)) / (phi'(w)(z-w)), the branch vanishing on the
    /// diagonal; every factor stays in the right half plane, so principal
    /// logarithms combine continuously.
    cplx log_offdiag_ratio(cplx z, cplx w) const {
        if (kind == Kind::identity) return {0.0, 0.0};
        const cplx uz = omega * z, uw = omega * w;
        return std::log(1.0 - uz * uw) + std::log(1.0 - uw) - 2.0 * std::log(1.0 - uz) -
               std::log(1.0 + uw);
    }
    /// boundary directions where phi degenerates (the slit tip preimage)
    std::vector<double> singular_angles() const {
        if (kind == Kind::identity) return {};
        return {-std::arg(omega)};
    }
    /// derivative ratios phi^(j+1)/phi' for j = 1..jmax, feeding eval_form
    std::vector<cplx> derivative_ratios(cplx z, int jmax) const {
        std::vector<cplx> r;
        const cplx d1 = dphi(1, z);
        for (int j = 1; j <= jmax; ++j) r.push_back(dphi(j + 1, z) / d1);
        return r;
    }
};

/// Tensor polar quadrature on the unit disk for dA = dx dy / pi. Radial
/// Gauss-Legendre panels are graded dyadically toward 0, toward the boundary
/// and optionally toward an interior ring; the angular rule per radius is a
/// uniform midpoint-offset grid when that resolves the integrand's boundary
/// peaks, and a dyadically graded panel family around each singular
/// direction otherwise.
struct DiskQuadrature {
    struct Ring {
        double r = 0.0;
        double wr = 0.0;  // radial weight including the 2 r dr factor
        int n_uniform = 0;
        std::vector<std::pair<double, double>> ang;  // (phi, weight/2pi), graded case
    };
    std::vector<Ring> rings;

    struct Params {
        int inner_levels = 18;
        int outer_levels = 28;
        int gl_radial = 12;
        int gl_angular = 10;
        int base_ang = 32;
        int max_uniform_ang = 2048;
        std::vector<double> sing_angles;  // boundary directions needing grading
        double ring = -1.0;               // interior radius of an integrand kink
        int ring_levels = 20;
    };

    Params params;

    static DiskQuadrature make() { return make(Params{}); }

    static DiskQuadrature make(const Params& p) {
        DiskQuadrature q;
        q.params = p;
        std::vector<double> brk{0.0};
        for (int l = p.inner_levels; l >= 2; --l) brk.push_back(std::ldexp(1.0, -l));
        brk.push_back(0.5);
        if (p.ring > 0.0 && p.ring < 1.0) {
            const double scale = std::min(p.ring, 1.0 - p.ring) / 2.0;
            for (int l = 1; l <= p.ring_levels; ++l) {
                brk.push_back(p.ring - scale * std::ldexp(1.0, -l + 1));
                brk.push_back(p.ring + scale * std::ldexp(1.0, -l + 1));
            }
            brk.push_back(p.ring);
        }
        for (int l = 1; l <= p.outer_levels; ++l) brk.push_back(1.0 - std::ldexp(1.0, -l));
        brk.push_back(1.0);
        std::sort(brk.begin(), brk.end());
        brk.erase(std::unique(brk.begin(), brk.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                  brk.end());

        const auto rrule = quadrule::gauss_legendre01(p.gl_radial);
        const auto arule = quadrule::gauss_legendre01(p.gl_angular);

        for (std::size_t pi = 0; pi + 1 < brk.size(); ++pi) {
            const double a = brk[pi], b = brk[pi + 1];
            for (std::size_t i = 0; i < rrule.nodes.size(); ++i) {
                Ring ring;
                ring.r = a + (b - a) * rrule.nodes[i];
                ring.wr = 2.0 * ring.r * (b - a) * rrule.weights[i];
                // peak scale at this radius: distance to the boundary, and to
                // the interior kink ring when present
                double delta = 1.0 - ring.r;
                if (p.ring > 0.0)
                    delta = std::min(delta, std::max(std::abs(ring.r - p.ring) / 2.0, 1e-13));
                const double need = p.base_ang / std::max(delta, 1e-13);
                if (p.sing_angles.empty() || need <= p.max_uniform_ang) {
                    ring.n_uniform = static_cast<int>(
                        std::clamp(need, double(p.base_ang), double(p.max_uniform_ang)));
                } else {
                    // graded angular panels around each singular direction;
                    // with one direction the panels tile [phi0, phi0 + 2pi)
                    const double phi0 = p.sing_angles.front();
                    const double dmin = std::max(delta / 4.0, 1e-14);
                    std::vector<double> abrk{0.0, dmin};
                    for (double w = dmin; w < std::numbers::pi; w *= 2.0)
                        abrk.push_back(std::min(w * 2.0, std::numbers::pi));
                    abrk.push_back(std::numbers::pi);
                    std::sort(abrk.begin(), abrk.end());
                    abrk.erase(std::unique(abrk.begin(), abrk.end()), abrk.end());
                    for (std::size_t k = 0; k + 1 < abrk.size(); ++k) {
                        const double lo = abrk[k], hi = abrk[k + 1];
                        for (std::size_t j = 0; j < arule.nodes.size(); ++j) {
                            const double xi = lo + (hi - lo) * arule.nodes[j];
                            const double wj = (hi - lo) * arule.weights[j] /
                                              (2.0 * std::numbers::pi);
                            ring.ang.emplace_back(phi0 + xi, wj);   // one side
                            ring.ang.emplace_back(phi0 - xi, wj);   // mirrored side
                        }
                    }
                }
                q.rings.push_back(std::move(ring));
            }
        }
        return q;
    }

    /// node-doubled companion for error estimates
    DiskQuadrature refined() const {
        Params r = params;
        r.inner_levels += 2;
        r.outer_levels += 2;
        r.gl_radial += 4;
        r.gl_angular += 4;
        r.base_ang *= 2;
        r.max_uniform_ang *= 2;
        return make(r);
    }

    /// integral of f against dA = dx dy / pi
    template <typename F>
    double integrate(F f) const {
        double total = 0.0;
        for (const auto& ring : rings) {
            double avg = 0.0;
            if (ring.n_uniform > 0) {
                for (int k = 0; k < ring.n_uniform; ++k) {
                    const double phi = 2.0 * std::numbers::pi * (k + 0.5) / ring.n_uniform;
                    avg += f(std::polar(ring.r, phi));
                }
                avg /= ring.n_uniform;
            } else {
                for (const auto& [phi, w] : ring.ang) avg += w * f(std::polar(ring.r, phi));
            }
            total += ring.wr * avg;
        }
        return total;
    }

    double area_check() const {
        return integrate([](cplx) { return 1.0; });
    }
};

/// Quadrature matched to a map's boundary singularities.
inline DiskQuadrature quadrature_for(const MapSample& map) {
    DiskQuadrature::Params p;
    p.sing_angles = map.singular_angles();
    return DiskQuadrature::make(p);
}

/// The area-theorem integral int_D |phi'(z) (z/phi(z))^{theta+1} - 1|^2
/// dA(z)/|z|^{2 theta + 2}. Bounded by 1/theta for every schlicht map, with
/// equality exactly for full mappings (the Koebe family here).
inline double prawitz_integral(const MapSample& map, double theta, const DiskQuadrature& quad) {
    if (!(theta > 0.0) || !(theta <= 1.0))
        throw std::domain_error("prawitz_integral: theta in (0,1] required");
    return quad.integrate([&](cplx z) {
        const cplx core =
            detail::cexpm1(map.log_dphi(z) + (theta + 1.0) * map.log_z_over_phi(z));
        return std::norm(core) * std::pow(std::abs(z), -2.0 * theta - 2.0);
    });
}

/// Phi_theta(z,w): the off-diagonal difference quotient, switched to its
/// diagonal Taylor form (through the degree-4 form coefficients) when z is
/// close to w.
inline cplx phi_theta_offdiag(const MapSample& map, double theta, cplx z, cplx w) {
    const cplx dz = z - w;
    if (std::abs(dz) < 1e-3) {
        static const std::array<forms::PhiForm, 4> kPhiForms{
            forms::phi_k_form(0), forms::phi_k_form(1), forms::phi_k_form(2),
            forms::phi_k_form(3)};
        const auto ratios = map.derivative_ratios(w, 5);
        cplx sum = 0.0;
        double kfact = 1.0;
        cplx dzk = 1.0;
        for (int k = 0; k <= 3; ++k) {
            sum += forms::eval_form(kPhiForms[k], theta, ratios) * dzk / kfact;
            dzk *= dz;
            kfact *= (k + 1);
        }
        return sum;
    }
    const cplx lg = map.log_dphi(z) - map.log_dphi(w) -
                    (theta + 1.0) * map.log_offdiag_ratio(z, w);
    return detail::cexpm1(lg) / dz;
}

/// L_theta(z,w) = (1 - ((1-|w|^2)/(1 - conj(w) z))^{1-theta}) / (z - w).
inline cplx l_theta(double theta, cplx z, cplx w) {
    const cplx dz = z - w;
    const double ww = std::norm(w);
    const cplx c = std::conj(w) / (1.0 - ww);
    if (dz == cplx(0.0)) return -(1.0 - theta) * c;  // diagonal limit
    const cplx v = detail::clog1p(-c * dz);  // log((1 - conj(w) z)/(1 - |w|^2))
    return -detail::cexpm1(-(1.0 - theta) * v) / dz;
}

/// LHS of the two-variable inequality at fixed w, evaluated after the
/// Moebius substitution z = (w - zeta)/(1 - conj(w) zeta) that moves the
/// singular point to zeta = 0 where the quadrature is graded.
inline double two_var_check(const MapSample& map, cplx w, double theta,
                            const DiskQuadrature& quad) {
    if (!(theta > 0.0) || !(theta <= 1.0))
        throw std::domain_error("two_var_check: theta in (0,1] required");
    if (!(std::abs(w) < 1.0)) throw std::domain_error("two_var_check: |w| < 1 required");
    const double ww = std::norm(w);
    return quad.integrate([&](cplx zeta) {
        const cplx den = 1.0 - std::conj(w) * zeta;
        const cplx z = (w - zeta) / den;
        const cplx val = phi_theta_offdiag(map, theta, z, w) + l_theta(theta, z, w);
        // |z-w|^{-2 theta} dA(z) = |zeta|^{-2theta} (1-|w|^2)^{2-2theta} |den|^{2theta-4} dA(zeta)
        return std::norm(val) * std::pow(std::abs(zeta), -2.0 * theta) *
               std::pow(1.0 - ww, 2.0 - 2.0 * theta) *
               std::pow(std::abs(den), 2.0 * theta - 4.0);
    });
}

/// Quadrature for two_var_check: the map's singular boundary direction pulled
/// back through the Moebius substitution.
inline DiskQuadrature quadrature_for_two_var(const MapSample& map, cplx w) {
    DiskQuadrature::Params p;
    for (double a : map.singular_angles()) {
        const cplx zs = std::polar(1.0, a);
        const cplx zeta_s = (w - zs) / (1.0 - std::conj(w) * zs);
        p.sing_angles.push_back(std::arg(zeta_s));
    }
    return DiskQuadrature::make(p);
}

/// RHS of the two-variable inequality.
inline double two_var_rhs(double theta, cplx w) {
    return std::pow(1.0 - std::norm(w), -2.0 * theta) / theta;
}

/// Weighted Bergman norm from Taylor coefficients:
/// ||g||_alpha^2 = sum_k k!/(alpha+2)_k |c_k|^2.
inline double norm_alpha(const std::vector<cplx>& coeffs, double alpha) {
    if (!(alpha > -1.0)) throw std::domain_error("norm_alpha: alpha > -1 required");
    double sum = 0.0, ratio = 1.0;  // k!/(alpha+2)_k at k = 0
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        sum += ratio * std::norm(coeffs[k]);
        ratio *= (k + 1.0) / (alpha + 2.0 + k);
    }
    return sum;
}

/// Taylor coefficients of the n-th derivative: d_m = c_{m+n} (m+1)_n.
inline std::vector<cplx> derivative_coeffs(const std::vector<cplx>& coeffs, int n) {
    std::vector<cplx> d;
    for (std::size_t m = 0; m + n < coeffs.size(); ++m)
        d.push_back(coeffs[m + n] * pochhammer(m + 1.0, n));
    return d;
}

/// (alpha+2)_{2n} ||g||_alpha^2 - ||g^(n)||_{alpha+2n}^2 via the coefficient
/// closed form; nonnegative for every coefficient sequence.
inline double asympt_gap(const std::vector<cplx>& coeffs, double alpha, int n) {
    if (n < 1) throw std::domain_error("asympt_gap: n >= 1 required");
    const double front = pochhammer(alpha + 2.0, 2 * n);
    double sum = 0.0, ratio = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double kk = static_cast<double>(k);
        const double fac = 1.0 - pochhammer(kk - n + 1.0, n) / pochhammer(kk + alpha + 2.0, n);
        sum += fac * ratio * std::norm(coeffs[k]);
        ratio *= (kk + 1.0) / (alpha + 2.0 + kk);
    }
    return front * sum;
}

/// 1/sigma(alpha,beta) as the double integral of |z-w|^{2 beta} over the
/// weighted bidisk, reduced by rotational symmetry to a radial integral of
/// per-center disk integrals F(r) = int_D |z - r|^{2 beta} dA(z). The inner
/// quadrature is rebuilt per r with its kink ring and angular peak graded.
inline double sigma_numeric(double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::domain_error("sigma_numeric: alpha, beta > -1 required");

    const auto F = [&](double r) {
        DiskQuadrature::Params p;
        p.inner_levels = 16;
        p.outer_levels = 6;  // the integrand is bounded at the rim
        p.gl_radial = 10;
        if (r > 1e-12) {
            p.ring = r;
            p.sing_angles = {0.0};
        }
        const auto quad = DiskQuadrature::make(p);
        return quad.integrate([&](cplx z) {
            const double d2 = std::norm(z - r);
            return std::pow(d2, beta);
        });
    };

    // 1/sigma = (alpha+1) int_0^1 (1-s)^alpha F(sqrt(s)) ds; substituting
    // s = 1-u puts the endpoint weight u^alpha in Gauss-Jacobi form
    const auto rule = quadrule::gauss_jacobi01(24, alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        total += rule.weights[i] * F(std::sqrt(1.0 - u));
    }
    return (alpha + 1.0) * total;
}

}  // namespace specbound::oracle

#endif  // SPECBOUND_ORACLE_HPP
