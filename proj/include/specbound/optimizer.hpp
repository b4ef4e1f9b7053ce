#ifndef SPECBOUND_OPTIMIZER_HPP
#define SPECBOUND_OPTIMIZER_HPP

// The beta-descent: start from the distortion-estimate bound, inch downward
// in steps no larger than theta0 (so the a-priori norm hypothesis of every
// criterion is inherited from the previous certified level), pick the first
// criterion that certifies each step, bisect the final edge, and emit a
// machine-replayable certificate. Table and plot generation run one descent
// per t, optionally across worker threads.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "specbound/criteria.hpp"

namespace specbound::optimizer {

using cplx = std::complex<double>;
using criteria::EmptinessEvidence;
using criteria::Mode;
using criteria::Verdict;

struct DescentConfig {
    double theta0 = 0.01;
    criteria::GridSpec grid{};
    std::vector<Mode> criteria_order{Mode::interval_I, Mode::interval_J};
    double step = 0.01;  // soundness requires step <= theta0
    double bisect_tol = 5e-4;
    double epsilon_start = 1e-3;
    SeriesControl series{};

    void validate() const {
        grid.validate();
        series.validate();
        if (!(theta0 > 0.0) || !(theta0 <= 1.0))
            throw std::invalid_argument("DescentConfig: theta0 in (0,1] required");
        if (!(step > 0.0) || step > theta0 + 1e-15)
            throw std::invalid_argument("DescentConfig: step must satisfy 0 < step <= theta0");
        if (!(bisect_tol > 0.0) || !(epsilon_start > 0.0))
            throw std::invalid_argument("DescentConfig: bisect_tol, epsilon_start > 0 required");
        if (criteria_order.empty())
            throw std::invalid_argument("DescentConfig: criteria_order must be nonempty");
    }

    /// J and E criteria need real tau; for complex tau the interval criteria
    /// become their disk counterpart.
    DescentConfig adapted_for(cplx tau) const {
        DescentConfig c = *this;
        if (tau.imag() != 0.0) {
            std::vector<Mode> order;
            for (Mode m : c.criteria_order) {
                if (m == Mode::interval_I || m == Mode::disk_D) order.push_back(Mode::disk_D);
                if (m == Mode::one_term) order.push_back(Mode::one_term);
            }
            if (order.empty()) order.push_back(Mode::disk_D);
            c.criteria_order = std::move(order);
        }
        return c;
    }
};

struct DescentStep {
    double beta_from = 0.0;
    double beta_to = 0.0;
    Mode criterion = Mode::interval_I;
    EmptinessEvidence evidence;
};

/// The audited chain of descent steps for one tau.
struct BoundCertificate {
    cplx tau;
    double trivial = 0.0;
    double beta_final = 0.0;
    std::vector<DescentStep> steps;
    DescentConfig config;
};

/// beta certified by the pointwise distortion estimate: 2|tau| + Re tau + eps.
inline double trivial_start(cplx tau, double epsilon) {
    if (tau == cplx(0.0)) throw std::domain_error("trivial_start: tau != 0 required");
    if (!(epsilon > 0.0)) throw std::domain_error("trivial_start: epsilon > 0 required");
    return 2.0 * std::abs(tau) + tau.real() + epsilon;
}

namespace detail {

inline std::pair<bool, DescentStep> try_step(cplx tau, double beta_from, double beta_to,
                                             const DescentConfig& cfg) {
    for (Mode m : cfg.criteria_order) {
        const auto ev =
            criteria::family_empty(tau, beta_to, cfg.theta0, m, cfg.grid, cfg.series);
        if (ev.verdict == Verdict::empty)
            return {true, DescentStep{beta_from, beta_to, m, ev}};
    }
    return {false, {}};
}

}  // namespace detail

/// Descend from the trivial bound. Deterministic given the config; never
/// fails hard (if no criterion ever fires the certificate carries the
/// trivial bound and an empty step list).
inline BoundCertificate descend(cplx tau, const DescentConfig& cfg_in) {
    const DescentConfig cfg = cfg_in.adapted_for(tau);
    cfg.validate();
    if (tau == cplx(0.0)) throw std::domain_error("descend: tau != 0 required");

    BoundCertificate cert;
    cert.tau = tau;
    cert.config = cfg;
    cert.trivial = trivial_start(tau, cfg.epsilon_start);

    double beta = cert.trivial;
    constexpr double kBetaFloor = 1e-7;

    while (beta > kBetaFloor) {
        double beta_next = beta - cfg.step;
        if (beta_next <= kBetaFloor) beta_next = beta / 2.0;
        if (beta_next >= beta) break;

        auto [ok, step] = detail::try_step(tau, beta, beta_next, cfg);
        if (ok) {
            cert.steps.push_back(std::move(step));
            beta = beta_next;
            continue;
        }
        // bisect the final edge: the criteria hold at beta, fail at beta_next
        double lo = beta_next, hi = beta;
        while (hi - lo > cfg.bisect_tol) {
            const double mid = 0.5 * (lo + hi);
            auto [okm, stepm] = detail::try_step(tau, hi, mid, cfg);
            if (okm) {
                cert.steps.push_back(std::move(stepm));
                hi = mid;
            } else {
                lo = mid;
            }
        }
        beta = hi;
        break;
    }
    cert.beta_final = beta;
    return cert;
}

/// Re-validate a certificate: chain invariants plus a replay of every step's
/// recorded witness.
inline bool verify_certificate(const BoundCertificate& cert, std::string* why = nullptr) {
    const auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const DescentConfig& cfg = cert.config;
    double prev = cert.trivial;
    for (const auto& st : cert.steps) {
        if (std::abs(st.beta_from - prev) > 1e-12) return fail("chain is not contiguous");
        if (!(st.beta_to < st.beta_from)) return fail("steps must strictly decrease beta");
        const double theta_hyp = (st.evidence.wkind == criteria::WitnessKind::one_term)
                                     ? st.evidence.thetas.at(0)
                                     : cfg.theta0;
        if (st.beta_to + theta_hyp < st.beta_from - 1e-12)
            return fail("hypothesis-chain violated: beta_to + theta < beta_from");

        // replay the witness at the recorded parameters
        switch (st.evidence.wkind) {
            case criteria::WitnessKind::one_term: {
                const double th = std::min(st.evidence.thetas.at(0), 1.0 - 1e-9);
                if (coeffs::one_term_margin(cert.tau, st.beta_to, th, cfg.series) < -1e-9)
                    return fail("one-term witness no longer holds");
                break;
            }
            case criteria::WitnessKind::single_empty: {
                const auto w = criteria::region_for(st.evidence.thetas.at(0), cert.tau,
                                                    st.beta_to, st.criterion, cfg.series);
                if (w.kind != criteria::RegionKind::empty &&
                    w.kind != criteria::RegionKind::one_term_fallback)
                    return fail("single-empty witness no longer holds");
                break;
            }
            case criteria::WitnessKind::disjoint_pair: {
                const auto wa = criteria::region_for(st.evidence.thetas.at(0), cert.tau,
                                                     st.beta_to, st.criterion, cfg.series);
                const auto wb = criteria::region_for(st.evidence.thetas.at(1), cert.tau,
                                                     st.beta_to, st.criterion, cfg.series);
                if (wa.kind != criteria::RegionKind::interval ||
                    wb.kind != criteria::RegionKind::interval)
                    return fail("pair witness regions are not intervals");
                if (!(wa.hi < wb.lo + 1e-12)) return fail("pair witness intervals overlap");
                break;
            }
            case criteria::WitnessKind::helly_triple: {
                std::array<criteria::ConvexWitness, 3> w;
                for (int i = 0; i < 3; ++i)
                    w[i] = criteria::region_for(st.evidence.thetas.at(i), cert.tau, st.beta_to,
                                                st.criterion, cfg.series);
                const auto tr = criteria::triple_region_empty(w[0], w[1], w[2]);
                if (!(tr.conclusive && tr.empty)) return fail("triple witness no longer holds");
                break;
            }
            default:
                return fail("step carries no witness");
        }
        prev = st.beta_to;
    }
    if (std::abs(prev - cert.beta_final) > 1e-12) return fail("beta_final mismatch");
    return true;
}

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::empty: return "empty";
        case Verdict::nonempty: return "nonempty";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline const char* witness_name(criteria::WitnessKind k) {
    using criteria::WitnessKind;
    switch (k) {
        case WitnessKind::none: return "none";
        case WitnessKind::single_empty: return "single-empty";
        case WitnessKind::disjoint_pair: return "disjoint-pair";
        case WitnessKind::helly_triple: return "helly-triple";
        case WitnessKind::common_point: return "common-point";
        case WitnessKind::one_term: return "one-term";
    }
    return "?";
}

/// Structured-text certificate document, deterministic for a fixed config.
inline std::string serialize(const BoundCertificate& cert) {
    std::ostringstream os;
    os.precision(17);
    const DescentConfig& c = cert.config;
    os << "specbound-certificate format=1\n";
    os << "tau_re " << cert.tau.real() << "\ntau_im " << cert.tau.imag() << "\n";
    os << "trivial_start " << cert.trivial << "\n";
    os << "beta_final " << cert.beta_final << "\n";
    os << "config theta0=" << c.theta0 << " step=" << c.step << " bisect_tol=" << c.bisect_tol
       << " epsilon=" << c.epsilon_start << " grid_n=" << c.grid.n
       << " refine_tol=" << c.grid.refine_tol << " margin_guard=" << c.grid.margin_guard
       << " rel_tol=" << c.series.rel_tol << " abs_tol=" << c.series.abs_tol
       << " max_terms=" << c.series.max_terms << " criteria=";
    for (std::size_t i = 0; i < c.criteria_order.size(); ++i)
        os << (i ? "," : "") << criteria::mode_name(c.criteria_order[i]);
    os << "\nsteps " << cert.steps.size() << "\n";
    for (const auto& st : cert.steps) {
        os << "step from=" << st.beta_from << " to=" << st.beta_to
           << " criterion=" << criteria::mode_name(st.criterion)
           << " witness=" << witness_name(st.evidence.wkind) << " thetas=";
        for (std::size_t i = 0; i < st.evidence.thetas.size(); ++i)
            os << (i ? "," : "") << st.evidence.thetas[i];
        os << " margin=" << st.evidence.margin;
        if (st.evidence.boundary) os << " boundary=1";
        os << "\n";
    }
    return os.str();
}

struct TableRow {
    double t = 0.0;
    double beta = 0.0;
    Mode criterion = Mode::interval_I;
    bool used_steps = false;  // false: only the trivial bound was certified
    double support = 0.0;     // max{-t-1, 3t-1, 0}
    int steps = 0;
    long runtime_ms = 0;
    BoundCertificate certificate;
};

struct SpectrumTable {
    std::vector<TableRow> rows;  // sorted by t
    DescentConfig config;
};

inline double support_line(double t) { return std::max({-t - 1.0, 3.0 * t - 1.0, 0.0}); }

/// One descent per t, distributed across worker threads; results are merged
/// in t-order independently of scheduling. Wall-clock timings are recorded
/// only when requested so that default artifacts stay byte-identical.
inline SpectrumTable build_table(std::vector<double> ts, const DescentConfig& cfg, int jobs = 1,
                                 bool timings = false) {
    for (double t : ts)
        if (t == 0.0) throw std::domain_error("build_table: t = 0 is the trivial value B(0) = 0");
    std::sort(ts.begin(), ts.end());

    SpectrumTable table;
    table.config = cfg;
    table.rows.resize(ts.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ts.size()) return;
            const auto t0 = std::chrono::steady_clock::now();
            TableRow row;
            row.t = ts[i];
            row.certificate = descend(cplx(ts[i], 0.0), cfg);
            row.beta = row.certificate.beta_final;
            row.used_steps = !row.certificate.steps.empty();
            row.criterion = row.used_steps ? row.certificate.steps.back().criterion
                                           : Mode::interval_I;
            row.support = support_line(ts[i]);
            row.steps = static_cast<int>(row.certificate.steps.size());
            if (timings)
                row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
            table.rows[i] = std::move(row);
        }
    };
    const int nw = std::max(1, std::min<int>(jobs, static_cast<int>(ts.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return table;
}

/// Delimited text: t,beta,criterion,theta0,grid_n,steps,runtime_ms.
inline std::string table_to_text(const SpectrumTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "t,beta,criterion,theta0,grid_n,steps,runtime_ms\n";
    for (const auto& r : table.rows) {
        os << r.t << "," << r.beta << ","
           << (r.used_steps ? criteria::mode_name(r.criterion) : "trivial")
           << (r.used_steps && r.criterion == Mode::interval_J ? "*" : "") << ","
           << table.config.theta0 << "," << table.config.grid.n << "," << r.steps << ","
           << r.runtime_ms << "\n";
    }
    return os.str();
}

/// Two-column plot series plus the support lines, '#'-prefixed headers.
inline std::string plot_data(const SpectrumTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "# B_*(t)\n";
    for (const auto& r : table.rows) os << r.t << " " << r.beta << "\n";
    os << "\n# B = -t-1\n";
    for (const auto& r : table.rows)
        if (-r.t - 1.0 >= 0.0) os << r.t << " " << (-r.t - 1.0) << "\n";
    os << "\n# B = 3t-1\n";
    for (const auto& r : table.rows)
        if (3.0 * r.t - 1.0 >= 0.0) os << r.t << " " << (3.0 * r.t - 1.0) << "\n";
    return os.str();
}

/// Chord bound for the exterior-class spectrum at s: convexity against the
/// anchor value 1 at t = 2, minimized over table points t1 < s.
inline double sigma_class_bound_at(double s, const SpectrumTable& table) {
    if (s == 2.0) return 1.0;
    if (!(s < 2.0)) throw std::domain_error("sigma_class_bound_at: needs s <= 2");
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& r : table.rows) {
        if (!(r.t < s)) continue;
        const double lam = (2.0 - s) / (2.0 - r.t);
        best = std::min(best, lam * r.beta + (1.0 - lam) * 1.0);
        found = true;
    }
    if (!found) throw std::domain_error("sigma_class_bound_at: no table point below s");
    return best;
}

}  // namespace specbound::optimizer

#endif  // SPECBOUND_OPTIMIZER_HPP
