#ifndef SPECBOUND_CRITERIA_HPP
#define SPECBOUND_CRITERIA_HPP

// Per-theta convex regions (intervals, disks, ellipses) and the emptiness
// decision for a theta-family. An empty family intersection certifies the
// spectrum bound at the current beta; the verdicts here are consumed by the
// descent and recorded, with their witnesses, in bound certificates.
//
// Three-valued verdicts throughout: "empty" is only reported together with a
// witness whose margin exceeds the guard, "nonempty" only with an exhibited
// common point; anything finer-grained than the grid resolves to
// "inconclusive", which certifies nothing.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "specbound/coeffs.hpp"

namespace specbound::criteria {

using cplx = std::complex<double>;

enum class Mode { one_term, interval_I, interval_J, disk_D, ellipse_E };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::one_term: return "one-term";
        case Mode::interval_I: return "two-term-I";
        case Mode::interval_J: return "two-term-J";
        case Mode::disk_D: return "two-term-D";
        case Mode::ellipse_E: return "three-term-E";
    }
    return "?";
}

enum class RegionKind { interval, whole_line, empty, disk, ellipse, one_term_fallback };

/// The region attached to one theta, plus the data needed to re-check it.
struct ConvexWitness {
    RegionKind kind = RegionKind::empty;
    double theta = 0.0;
    // interval
    double lo = 0.0, hi = 0.0;
    // disk
    cplx center{};
    double radius = 0.0;
    // ellipse: |a1 - x a2|^2 + |a3 - x a4 - y a5|^2 <= radius_sq
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
    double radius_sq = 0.0;
    // margin by which a single-theta region is already empty
    double empty_margin = 0.0;
};

struct GridSpec {
    int n = 256;
    double refine_tol = 1e-6;   // golden-section tolerance in theta
    double margin_guard = 1e-9;

    void validate() const {
        if (n < 2 || !(refine_tol > 0.0) || !(margin_guard > 0.0))
            throw std::invalid_argument("GridSpec: n >= 2 and positive tolerances required");
    }
};

enum class Verdict { empty, nonempty, inconclusive };

enum class WitnessKind { none, single_empty, disjoint_pair, helly_triple, common_point, one_term };

struct EmptinessEvidence {
    Verdict verdict = Verdict::inconclusive;
    Mode mode = Mode::interval_I;
    WitnessKind wkind = WitnessKind::none;
    std::vector<double> thetas;  // 1..3 witness thetas, meaning depends on wkind
    double x = 0.0, y = 0.0;     // common point, when exhibited
    double margin = 0.0;
    bool boundary = false;       // one-term fallback accepted at margin ~ 0
};

inline double interval_radius(double beta) {
    return 1.0 / std::sqrt((beta + 1.0) * (beta + 2.0) * (beta + 3.0) * (beta + 4.0));
}

inline double j_radius(double t, double beta) {
    return t * t / (4.0 * (beta + 1.0) * std::sqrt(beta * (beta + 4.0)));
}

/// Build the region for a single theta. A failing last-condition comes back
/// as kind = one_term_fallback rather than an error: at such theta the
/// one-term criterion already holds (with ">=") and the family test short
/// circuits through it.
inline ConvexWitness region_for(double theta, cplx tau, double beta, Mode mode,
                                const SeriesControl& ctl) {
    if (mode == Mode::one_term) throw std::invalid_argument("region_for: one_term has no region");
    if ((mode == Mode::interval_J || mode == Mode::ellipse_E) && tau.imag() != 0.0)
        throw std::invalid_argument("region_for: J and E modes require real tau");

    ConvexWitness w;
    w.theta = theta;
    const int order = (mode == Mode::ellipse_E) ? 3 : 2;
    const auto A = coeffs::A_coefficients(theta, tau, beta, order, ctl);
    if (!A.denominator_positive) {
        w.kind = RegionKind::one_term_fallback;
        return w;
    }

    const auto interval_from_linear = [&](double cons, double lead, double r) {
        if (lead != 0.0) {
            w.kind = RegionKind::interval;
            w.lo = (cons - r) / lead;
            w.hi = (cons + r) / lead;
            if (w.lo > w.hi) std::swap(w.lo, w.hi);
        } else if (std::abs(cons) <= r) {
            w.kind = RegionKind::whole_line;
        } else {
            w.kind = RegionKind::empty;
            w.empty_margin = std::abs(cons) - r;
        }
    };

    switch (mode) {
        case Mode::interval_I:
            interval_from_linear(A.a1.real(), A.a2.real(), interval_radius(beta));
            break;
        case Mode::interval_J:
            interval_from_linear(A.a2.real(), A.a1.real(), j_radius(tau.real(), beta));
            break;
        case Mode::disk_D: {
            const double r = interval_radius(beta);
            if (A.a2 == cplx(0.0)) {
                if (std::abs(A.a1) <= r) {
                    w.kind = RegionKind::whole_line;
                } else {
                    w.kind = RegionKind::empty;
                    w.empty_margin = std::abs(A.a1) - r;
                }
            } else {
                w.kind = RegionKind::disk;
                w.center = A.a1 / A.a2;
                w.radius = r / std::abs(A.a2);
            }
            break;
        }
        case Mode::ellipse_E: {
            w.kind = RegionKind::ellipse;
            w.a1 = A.a1.real();
            w.a2 = A.a2.real();
            w.a3 = A.a3->real();
            w.a4 = A.a4->real();
            w.a5 = A.a5->real();
            w.radius_sq = 1.0 / ((beta + 1.0) * (beta + 2.0) * (beta + 3.0) * (beta + 4.0));
            break;
        }
        default: break;
    }
    return w;
}

namespace detail {

/// golden-section search for the minimum of f on [a,b]; returns (x, f(x))
template <typename F>
std::pair<double, double> golden_min(F f, double a, double b, double xtol) {
    constexpr double inv_phi = 0.61803398874989484820;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

/// Nelder-Mead minimization in 2-D; the objectives here are convex, so any
/// local minimum found is global. Used for the max-of-quadratics descent.
template <typename F>
std::pair<std::array<double, 2>, double> nelder_mead2(F f, std::array<double, 2> start,
                                                      double scale, int max_iter = 400) {
    std::array<std::array<double, 2>, 3> pts{{{start[0], start[1]},
                                              {start[0] + scale, start[1]},
                                              {start[0], start[1] + scale}}};
    std::array<double, 3> fv{f(pts[0]), f(pts[1]), f(pts[2])};
    for (int it = 0; it < max_iter; ++it) {
        // order
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const auto& best = pts[idx[0]];
        const auto& worst = pts[idx[2]];
        if (std::abs(fv[idx[2]] - fv[idx[0]]) <=
            1e-14 * (std::abs(fv[idx[0]]) + 1e-300) + 1e-300)
            break;
        const std::array<double, 2> mid{(pts[idx[0]][0] + pts[idx[1]][0]) / 2.0,
                                        (pts[idx[0]][1] + pts[idx[1]][1]) / 2.0};
        const std::array<double, 2> refl{2.0 * mid[0] - worst[0], 2.0 * mid[1] - worst[1]};
        const double fr = f(refl);
        if (fr < fv[idx[0]]) {
            const std::array<double, 2> exp2{3.0 * mid[0] - 2.0 * worst[0],
                                             3.0 * mid[1] - 2.0 * worst[1]};
            const double fe = f(exp2);
            pts[idx[2]] = fe < fr ? exp2 : refl;
            fv[idx[2]] = std::min(fe, fr);
        } else if (fr < fv[idx[1]]) {
            pts[idx[2]] = refl;
            fv[idx[2]] = fr;
        } else {
            const std::array<double, 2> con{0.5 * (mid[0] + worst[0]), 0.5 * (mid[1] + worst[1])};
            const double fc = f(con);
            if (fc < fv[idx[2]]) {
                pts[idx[2]] = con;
                fv[idx[2]] = fc;
            } else {
                for (int i : {idx[1], idx[2]}) {
                    pts[i] = {0.5 * (pts[i][0] + best[0]), 0.5 * (pts[i][1] + best[1])};
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    int bi = 0;
    for (int i = 1; i < 3; ++i)
        if (fv[i] < fv[bi]) bi = i;
    return {pts[bi], fv[bi]};
}

inline double dist(cplx a, cplx b) { return std::abs(a - b); }

/// One quadratic of the ellipse criterion: Q(x,y) = (a1 - x a2)^2 + (a3 - x a4 - y a5)^2.
struct QuadForm {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;

    double eval(double x, double y) const {
        const double u = a1 - x * a2;
        const double v = a3 - x * a4 - y * a5;
        return u * u + v * v;
    }
};

/// Exact 2-D minimax of a family of QuadForms by nested golden section:
/// for fixed x the function y -> max_i Q_i is a max of parabolas whose
/// minimum lies in the hull of their vertices; the partial minimum in y is
/// convex in x, bracketed by doubling. Robust for every degeneracy (strips,
/// x-free or y-free members).
struct MinimaxResult {
    double x = 0.0, y = 0.0, value = 0.0;
};

inline MinimaxResult minimax_quadratics(const std::vector<QuadForm>& qs,
                                        double xtol = 1e-10) {
    const auto max_at = [&](double x, double y) {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& q : qs) m = std::max(m, q.eval(x, y));
        return m;
    };

    const auto min_over_y = [&](double x, double* ystar) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& q : qs) {
            if (q.a5 != 0.0) {
                const double v = (q.a3 - x * q.a4) / q.a5;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (!(lo <= hi)) {  // no member depends on y
            if (ystar) *ystar = 0.0;
            return max_at(x, 0.0);
        }
        lo -= 1e-12 + 1e-9 * std::abs(lo);
        hi += 1e-12 + 1e-9 * std::abs(hi);
        const auto [y, fy] = golden_min([&](double yy) { return max_at(x, yy); }, lo, hi,
                                        xtol * (1.0 + hi - lo));
        if (ystar) *ystar = y;
        return fy;
    };

    // bracket the x minimizer of G(x) = min_y max_i
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& q : qs) {
        if (q.a2 != 0.0) {
            lo = std::min(lo, q.a1 / q.a2);
            hi = std::max(hi, q.a1 / q.a2);
        }
        if (q.a4 != 0.0 && q.a5 == 0.0) {
            lo = std::min(lo, q.a3 / q.a4);
            hi = std::max(hi, q.a3 / q.a4);
        }
    }
    MinimaxResult res;
    if (!(lo <= hi)) {  // no member depends on x through a reachable vertex
        res.x = 0.0;
        res.value = min_over_y(0.0, &res.y);
        return res;
    }
    double pad = 1.0 + 0.5 * (hi - lo);
    lo -= pad;
    hi += pad;
    const auto G = [&](double x) { return min_over_y(x, nullptr); };
    for (int it = 0; it < 80; ++it) {  // expand while the minimum may sit outside
        const double w = hi - lo;
        bool grew = false;
        if (G(lo) < G(lo + 1e-3 * w)) {
            lo -= w;
            grew = true;
        }
        if (G(hi) < G(hi - 1e-3 * w)) {
            hi += w;
            grew = true;
        }
        if (!grew) break;
    }
    const auto [x, fx] = golden_min(G, lo, hi, xtol * (1.0 + hi - lo));
    res.x = x;
    res.value = min_over_y(x, &res.y);
    res.value = std::min(res.value, fx);
    return res;
}

/// Distance from point p to the lens D1 cap D2 (both disks, known to
/// intersect); 0 if p lies inside. Exact up to floating point: the nearest
/// point is a lens corner or a radial projection onto one of the two arcs.
inline double dist_to_lens(cplx p, cplx c1, double r1, cplx c2, double r2) {
    const bool in1 = dist(p, c1) <= r1, in2 = dist(p, c2) <= r2;
    if (in1 && in2) return 0.0;
    // circle-circle intersection points
    const double d = dist(c1, c2);
    const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    const double h2 = r1 * r1 - a * a;
    const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
    const cplx u = (c2 - c1) / d;
    const cplx base = c1 + a * u;
    const cplx perp = cplx(-u.imag(), u.real());
    const cplx pA = base + h * perp, pB = base - h * perp;
    double best = std::min(dist(p, pA), dist(p, pB));
    // radial projections onto each bounding arc, valid when inside the other disk
    const auto arc_candidate = [&](cplx cm, double rm, cplx cother, double rother) {
        const double dm = dist(p, cm);
        cplx q;
        if (dm > 1e-300) {
            q = cm + rm * (p - cm) / dm;
        } else {
            // p at the circle center: nearest arc point lies toward the other disk
            q = cm + rm * (cother - cm) / dist(cother, cm);
        }
        if (dist(q, cother) <= rother) best = std::min(best, dist(p, q));
    };
    arc_candidate(c1, r1, c2, r2);
    arc_candidate(c2, r2, c1, r1);
    return best;
}

}  // namespace detail

struct TripleResult {
    bool conclusive = false;
    bool empty = false;
    double margin = 0.0;  // emptiness margin when empty; feasibility slack when not
    double x = 0.0, y = 0.0;  // common point when nonempty (disk: x+iy)
};

/// Exact emptiness test for three disks: the triple intersection equals
/// lens(i,j) intersect D_k, so pairwise checks plus the lens-distance test
/// settle it in closed form.
inline TripleResult disk_triple_empty(const ConvexWitness& r1, const ConvexWitness& r2,
                                      const ConvexWitness& r3) {
    const std::array<const ConvexWitness*, 3> d{&r1, &r2, &r3};
    for (const auto* w : d)
        if (w->kind != RegionKind::disk)
            throw std::invalid_argument("disk_triple_empty: all regions must be disks");

    TripleResult res;
    // pairwise disjoint?
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double gap = detail::dist(d[i]->center, d[j]->center) - d[i]->radius - d[j]->radius;
            if (gap > 0.0) {
                res.conclusive = true;
                res.empty = true;
                res.margin = gap;
                return res;
            }
        }
    // containment reduces the lens to the smaller disk
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            if (detail::dist(d[i]->center, d[j]->center) + d[i]->radius <= d[j]->radius) {
                const int k = 3 - i - j;
                const double gap =
                    detail::dist(d[i]->center, d[k]->center) - d[i]->radius - d[k]->radius;
                res.conclusive = true;
                res.empty = gap > 0.0;
                res.margin = gap;
                if (!res.empty) {
                    // a common point: on the segment between centers
                    const cplx p = d[i]->center +
                                   (d[k]->center - d[i]->center) *
                                       (d[i]->radius / std::max(d[i]->radius + d[k]->radius,
                                                                1e-300));
                    res.x = p.real();
                    res.y = p.imag();
                }
                return res;
            }
        }
    // general position: distance from c3 to lens(1,2), maximized over the
    // three role assignments for the best certificate margin
    double best_margin = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        const double m = detail::dist_to_lens(d[k]->center, d[i]->center, d[i]->radius,
                                              d[j]->center, d[j]->radius) -
                         d[k]->radius;
        best_margin = std::max(best_margin, m);
    }
    res.conclusive = true;
    res.empty = best_margin > 0.0;
    res.margin = best_margin;
    if (!res.empty) {
        // exhibit a common point: nearest lens(1,2) point to c3 lies inside D3
        // when margin <= 0; fall back to a feasibility descent only if needed
        const cplx c3 = d[2]->center;
        const auto f = [&](std::array<double, 2> p) {
            const cplx z(p[0], p[1]);
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto* w : d) worst = std::max(worst, detail::dist(z, w->center) - w->radius);
            return worst;
        };
        auto [p, fv] = detail::nelder_mead2(f, {c3.real(), c3.imag()},
                                            std::max(1e-3, d[2]->radius));
        res.x = p[0];
        res.y = p[1];
        res.margin = fv;  // <= 0 when truly nonempty
        if (fv > 0.0) res.conclusive = false;
    }
    return res;
}

/// Emptiness of three ellipses by the exact convex minimax: minimize
/// F(x,y) = max_j Q_j(x,y) and compare with the squared radius. Returns
/// inconclusive when the margin is inside the tolerance band.
inline TripleResult ellipse_triple_empty(const ConvexWitness& r1, const ConvexWitness& r2,
                                         const ConvexWitness& r3, double tol = 1e-11) {
    const std::array<const ConvexWitness*, 3> e{&r1, &r2, &r3};
    std::vector<detail::QuadForm> qs;
    for (const auto* w : e) {
        if (w->kind != RegionKind::ellipse)
            throw std::invalid_argument("ellipse_triple_empty: all regions must be ellipses");
        if (std::abs(w->radius_sq - e[0]->radius_sq) >
            1e-12 * std::max(1.0, e[0]->radius_sq))
            throw std::invalid_argument(
                "ellipse_triple_empty: the family shares one radius");
        qs.push_back({w->a1, w->a2, w->a3, w->a4, w->a5});
    }
    const double rsq = e[0]->radius_sq;
    const auto mm = detail::minimax_quadratics(qs);

    TripleResult res;
    res.x = mm.x;
    res.y = mm.y;
    res.margin = mm.value - rsq;
    if (res.margin > tol) {
        res.conclusive = true;
        res.empty = true;
    } else if (res.margin <= 0.0) {
        res.conclusive = true;
        res.empty = false;
    } else {
        res.conclusive = false;  // inside the tolerance band: never certify
    }
    return res;
}

/// Dispatch on region kind.
inline TripleResult triple_region_empty(const ConvexWitness& r1, const ConvexWitness& r2,
                                        const ConvexWitness& r3) {
    if (r1.kind == RegionKind::disk) return disk_triple_empty(r1, r2, r3);
    if (r1.kind == RegionKind::ellipse) return ellipse_triple_empty(r1, r2, r3);
    throw std::invalid_argument("triple_region_empty: disk or ellipse regions expected");
}

/// Core of the interval-family decision, exposed for direct testing: given
/// closed intervals, decide emptiness of the intersection by the 1-D Helly
/// reduction inf hi < sup lo.
struct IntervalFamilyResult {
    Verdict verdict = Verdict::inconclusive;
    std::size_t arg_sup_lo = 0, arg_inf_hi = 0;
    double sup_lo = 0.0, inf_hi = 0.0;
};

inline IntervalFamilyResult interval_family_verdict(const std::vector<std::array<double, 2>>& iv,
                                                    double margin_guard) {
    IntervalFamilyResult r;
    if (iv.empty()) {
        r.verdict = Verdict::nonempty;
        return r;
    }
    r.sup_lo = -std::numeric_limits<double>::infinity();
    r.inf_hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (iv[i][0] > r.sup_lo) {
            r.sup_lo = iv[i][0];
            r.arg_sup_lo = i;
        }
        if (iv[i][1] < r.inf_hi) {
            r.inf_hi = iv[i][1];
            r.arg_inf_hi = i;
        }
    }
    if (r.inf_hi < r.sup_lo - margin_guard)
        r.verdict = Verdict::empty;
    else if (r.inf_hi > r.sup_lo + margin_guard)
        r.verdict = Verdict::nonempty;
    else
        r.verdict = Verdict::inconclusive;
    return r;
}

/// Decide emptiness of the intersection over theta in [theta0, 1] for the
/// given mode. Any theta where the last-condition fails resolves the family
/// immediately through the one-term fallback (the criterion holds there with
/// ">=", boundary accepted). one_term mode scans the margin directly.
inline EmptinessEvidence family_empty(cplx tau, double beta, double theta0, Mode mode,
                                      const GridSpec& grid, const SeriesControl& ctl) {
    grid.validate();
    if (!(theta0 > 0.0) || !(theta0 <= 1.0))
        throw std::domain_error("family_empty: theta0 in (0,1] required");
    if (!(beta > 0.0)) throw std::domain_error("family_empty: beta > 0 required");

    EmptinessEvidence ev;
    ev.mode = mode;

    const int n = grid.n;
    std::vector<double> thetas(n);
    for (int i = 0; i < n; ++i)
        thetas[i] = theta0 + (1.0 - theta0) * static_cast<double>(i) / (n - 1);

    if (mode == Mode::one_term) {
        // maximize the margin over theta; the criterion needs theta < 1
        double best = -std::numeric_limits<double>::infinity();
        int besti = 0;
        for (int i = 0; i < n; ++i) {
            const double th = std::min(thetas[i], 1.0 - 1e-9);
            const double m = coeffs::one_term_margin(tau, beta, th, ctl);
            if (m > best) {
                best = m;
                besti = i;
            }
        }
        const double lo = thetas[std::max(0, besti - 1)];
        const double hi = std::min(thetas[std::min(n - 1, besti + 1)], 1.0 - 1e-9);
        const auto [thstar, negm] = detail::golden_min(
            [&](double th) { return -coeffs::one_term_margin(tau, beta, th, ctl); }, lo, hi,
            grid.refine_tol);
        const double m = -negm;
        if (m >= -1e-12) {
            ev.verdict = Verdict::empty;  // criterion satisfied: bound certified
            ev.wkind = WitnessKind::one_term;
            ev.thetas = {thstar};
            ev.margin = m;
            ev.boundary = (m < grid.margin_guard);
        } else {
            ev.verdict = Verdict::nonempty;  // criterion fails everywhere scanned
            ev.wkind = WitnessKind::none;
            ev.margin = m;
        }
        return ev;
    }

    // build per-theta regions
    std::vector<ConvexWitness> regions(n);
    for (int i = 0; i < n; ++i) {
        regions[i] = region_for(thetas[i], tau, beta, mode, ctl);
        if (regions[i].kind == RegionKind::one_term_fallback) {
            const double m = coeffs::one_term_margin(tau, beta, std::min(thetas[i], 1.0 - 1e-9), ctl);
            ev.verdict = Verdict::empty;
            ev.wkind = WitnessKind::one_term;
            ev.thetas = {thetas[i]};
            ev.margin = m;
            ev.boundary = (m < grid.margin_guard);
            return ev;
        }
        if (regions[i].kind == RegionKind::empty) {
            ev.verdict = Verdict::empty;
            ev.wkind = WitnessKind::single_empty;
            ev.thetas = {thetas[i]};
            ev.margin = regions[i].empty_margin;
            return ev;
        }
    }

    if (mode == Mode::interval_I || mode == Mode::interval_J) {
        const auto endpoints = [&](double th) -> std::optional<std::array<double, 2>> {
            const auto w = region_for(th, tau, beta, mode, ctl);
            if (w.kind == RegionKind::interval) return std::array<double, 2>{w.lo, w.hi};
            return std::nullopt;  // whole-line or fallback: no constraint here
        };

        std::vector<std::array<double, 2>> iv;
        std::vector<double> iv_theta;
        for (int i = 0; i < n; ++i) {
            if (regions[i].kind == RegionKind::interval) {
                iv.push_back({regions[i].lo, regions[i].hi});
                iv_theta.push_back(thetas[i]);
            }
        }
        if (iv.empty()) {
            ev.verdict = Verdict::nonempty;  // every region is the whole line
            ev.wkind = WitnessKind::common_point;
            ev.x = 0.0;
            return ev;
        }
        auto base = interval_family_verdict(iv, grid.margin_guard);

        // local refinement around the extremizers tightens sup lo and inf hi
        const auto refine = [&](std::size_t idx, bool maximize_lo) {
            const double tc = iv_theta[idx];
            const double span = (1.0 - theta0) / (n - 1);
            const double a = std::max(theta0, tc - span), b = std::min(1.0, tc + span);
            const auto f = [&](double th) {
                const auto ep = endpoints(th);
                if (!ep) return std::numeric_limits<double>::infinity();
                return maximize_lo ? -(*ep)[0] : (*ep)[1];
            };
            const auto [thx, fx] = detail::golden_min(f, a, b, grid.refine_tol);
            return std::make_pair(thx, maximize_lo ? -fx : fx);
        };
        auto [th_lo, sup_lo] = refine(base.arg_sup_lo, true);
        auto [th_hi, inf_hi] = refine(base.arg_inf_hi, false);
        sup_lo = std::max(sup_lo, base.sup_lo);
        inf_hi = std::min(inf_hi, base.inf_hi);
        if (sup_lo == base.sup_lo) th_lo = iv_theta[base.arg_sup_lo];
        if (inf_hi == base.inf_hi) th_hi = iv_theta[base.arg_inf_hi];

        ev.margin = sup_lo - inf_hi;
        if (inf_hi < sup_lo - grid.margin_guard) {
            ev.verdict = Verdict::empty;
            ev.wkind = WitnessKind::disjoint_pair;
            ev.thetas = {th_hi, th_lo};  // interval at th_hi ends before th_lo's begins
        } else if (inf_hi > sup_lo + grid.margin_guard) {
            ev.verdict = Verdict::nonempty;
            ev.wkind = WitnessKind::common_point;
            ev.x = 0.5 * (sup_lo + inf_hi);
        } else {
            ev.verdict = Verdict::inconclusive;
        }
        return ev;
    }

    // disks and ellipses: convex minimax descent over the whole family, then
    // a Helly triple certificate from the active set
    const bool disks = (mode == Mode::disk_D);
    std::vector<int> active;  // indices of constraining regions
    for (int i = 0; i < n; ++i)
        if (regions[i].kind != RegionKind::whole_line) active.push_back(i);
    if (active.empty()) {
        ev.verdict = Verdict::nonempty;
        ev.wkind = WitnessKind::common_point;
        return ev;
    }

    double fmin = std::numeric_limits<double>::infinity();
    std::array<double, 2> pmin{0.0, 0.0};
    if (disks) {
        const auto violation = [&](std::array<double, 2> p) {
            double worst = -std::numeric_limits<double>::infinity();
            for (int i : active)
                worst = std::max(worst, detail::dist(cplx(p[0], p[1]), regions[i].center) -
                                            regions[i].radius);
            return worst;
        };
        std::vector<std::array<double, 2>> starts;
        cplx c{0.0, 0.0};
        for (int i : active) c += regions[i].center;
        c /= static_cast<double>(active.size());
        starts.push_back({c.real(), c.imag()});
        starts.push_back({regions[active.front()].center.real(),
                          regions[active.front()].center.imag()});
        starts.push_back({regions[active.back()].center.real(),
                          regions[active.back()].center.imag()});
        for (const auto& s : starts)
            for (double scale : {1.0, 1e-2}) {
                auto [p, fv] = detail::nelder_mead2(violation, s, scale, 600);
                if (fv < fmin) {
                    fmin = fv;
                    pmin = p;
                }
            }
    } else {
        std::vector<detail::QuadForm> qs;
        for (int i : active)
            qs.push_back({regions[i].a1, regions[i].a2, regions[i].a3, regions[i].a4,
                          regions[i].a5});
        const auto mm = detail::minimax_quadratics(qs);
        fmin = mm.value - regions[active.front()].radius_sq;
        pmin = {mm.x, mm.y};
    }

    if (fmin <= 0.0) {
        ev.verdict = Verdict::nonempty;
        ev.wkind = WitnessKind::common_point;
        ev.x = pmin[0];
        ev.y = pmin[1];
        ev.margin = fmin;
        return ev;
    }

    // candidate Helly triple: the three largest violations at the minimizer
    std::vector<std::pair<double, int>> viol;
    for (int i : active) {
        const auto& w = regions[i];
        double v;
        if (disks) {
            v = detail::dist(cplx(pmin[0], pmin[1]), w.center) - w.radius;
        } else {
            const double u1 = w.a1 - pmin[0] * w.a2;
            const double u2 = w.a3 - pmin[0] * w.a4 - pmin[1] * w.a5;
            v = (u1 * u1 + u2 * u2) - w.radius_sq;
        }
        viol.push_back({v, i});
    }
    std::sort(viol.begin(), viol.end(), std::greater<>());
    if (viol.size() >= 3) {
        for (std::size_t a = 0; a < std::min<std::size_t>(viol.size(), 6); ++a)
            for (std::size_t b = a + 1; b < std::min<std::size_t>(viol.size(), 6); ++b)
                for (std::size_t c = b + 1; c < std::min<std::size_t>(viol.size(), 6); ++c) {
                    const auto tr = triple_region_empty(regions[viol[a].second],
                                                        regions[viol[b].second],
                                                        regions[viol[c].second]);
                    if (tr.conclusive && tr.empty && tr.margin > grid.margin_guard) {
                        ev.verdict = Verdict::empty;
                        ev.wkind = WitnessKind::helly_triple;
                        ev.thetas = {thetas[viol[a].second], thetas[viol[b].second],
                                     thetas[viol[c].second]};
                        ev.margin = tr.margin;
                        return ev;
                    }
                }
    }
    ev.verdict = Verdict::inconclusive;
    ev.margin = fmin;
    return ev;
}

}  // namespace specbound::criteria

#endif  // SPECBOUND_CRITERIA_HPP
