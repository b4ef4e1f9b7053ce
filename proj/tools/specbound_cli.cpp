// Command-line front end: single-bound runs, table and plot-data generation,
// constant inspection, and the quadrature verification suite.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "specbound/optimizer.hpp"
#include "specbound/oracle.hpp"

namespace sb = specbound;
using sb::optimizer::DescentConfig;
using cplx = std::complex<double>;

namespace {

struct CommonOpts {
    double theta0 = 0.01;
    int grid_n = 256;
    double step = 0.01;
    double bisect_tol = 5e-4;
    double epsilon = 1e-3;
    double rel_tol = 1e-12;
    int max_terms = 100000;
    std::string criteria = "two-term-I,two-term-J";
    std::string out;
    std::string format = "delimited";
    int jobs = 1;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--theta0", o.theta0, "lower end of the theta family (default 0.01)");
    cmd->add_option("--grid-n", o.grid_n, "theta grid size (default 256)");
    cmd->add_option("--step", o.step, "descent step, must be <= theta0 (default 0.01)");
    cmd->add_option("--bisect-tol", o.bisect_tol, "final-edge bisection tolerance (default 5e-4)");
    cmd->add_option("--epsilon", o.epsilon, "slack of the trivial start (default 1e-3)");
    cmd->add_option("--rel-tol", o.rel_tol, "series relative tolerance (default 1e-12)");
    cmd->add_option("--max-terms", o.max_terms, "series term budget (default 100000)");
    cmd->add_option("--criteria", o.criteria,
                    "comma list from one-term,two-term-I,two-term-J,three-term-E");
    cmd->add_option("--out", o.out, "output path");
    cmd->add_option("--format", o.format, "table format: delimited | text");
    cmd->add_option("--jobs", o.jobs, "worker threads for table/plot runs (default 1)");
    cmd->add_flag("--timings", o.timings,
                  "record wall-clock runtime_ms (off by default so artifacts are reproducible)");
}

sb::criteria::Mode parse_mode(const std::string& s) {
    if (s == "one-term") return sb::criteria::Mode::one_term;
    if (s == "two-term-I") return sb::criteria::Mode::interval_I;
    if (s == "two-term-J") return sb::criteria::Mode::interval_J;
    if (s == "two-term-D") return sb::criteria::Mode::disk_D;
    if (s == "three-term-E") return sb::criteria::Mode::ellipse_E;
    throw CLI::ValidationError("criteria", "unknown criterion '" + s + "'");
}

DescentConfig make_config(const CommonOpts& o) {
    DescentConfig cfg;
    cfg.theta0 = o.theta0;
    cfg.grid.n = o.grid_n;
    cfg.step = o.step;
    cfg.bisect_tol = o.bisect_tol;
    cfg.epsilon_start = o.epsilon;
    cfg.series.rel_tol = o.rel_tol;
    cfg.series.max_terms = o.max_terms;
    cfg.criteria_order.clear();
    std::stringstream ss(o.criteria);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.criteria_order.push_back(parse_mode(item));
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string config_echo(const DescentConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "# config theta0=" << c.theta0 << " step=" << c.step << " bisect_tol=" << c.bisect_tol
       << " epsilon=" << c.epsilon_start << " grid_n=" << c.grid.n
       << " rel_tol=" << c.series.rel_tol << " max_terms=" << c.series.max_terms
       << " criteria=";
    for (std::size_t i = 0; i < c.criteria_order.size(); ++i)
        os << (i ? "," : "") << sb::criteria::mode_name(c.criteria_order[i]);
    os << "\n";
    return os.str();
}

std::string table_text_pretty(const sb::optimizer::SpectrumTable& table) {
    std::ostringstream os;
    os << "      t        B_*(t)   criterion     support\n";
    char buf[128];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%9.3f   %9.5f   %-12s %8.3f\n", r.t, r.beta,
                      (std::string(r.used_steps ? sb::criteria::mode_name(r.criterion)
                                                : "trivial") +
                       (r.used_steps && r.criterion == sb::criteria::Mode::interval_J ? "*" : ""))
                          .c_str(),
                      r.support);
        os << buf;
    }
    return os.str();
}

int run_verify(bool quick) {
    using namespace sb::oracle;
    int failures = 0;
    const auto report = [&](bool ok, const std::string& name, double gap) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "  (measured gap " << gap << ")\n";
        if (!ok) ++failures;
    };

    const auto plain = DiskQuadrature::make();
    report(std::abs(plain.area_check() - 1.0) < 1e-10, "disk quadrature: area = 1",
           std::abs(plain.area_check() - 1.0));

    const MapSample zoo[] = {MapSample::identity(), MapSample::koebe(),
                             MapSample::rotated_koebe(0.7), MapSample::rotated_koebe(2.4)};
    for (const auto& map : zoo) {
        const auto quad = quadrature_for(map);
        for (double theta : {0.25, 0.5, 0.75, 1.0}) {
            const double v = prawitz_integral(map, theta, quad);
            report(v <= 1.0 / theta + 1e-3,
                   "area-theorem bound: " + map.name + " theta=" + std::to_string(theta),
                   1.0 / theta - v);
        }
    }
    {
        const auto map = MapSample::koebe();
        const auto quad = quadrature_for(map);
        for (double theta : {0.5, 1.0}) {
            const double v = prawitz_integral(map, theta, quad);
            report(std::abs(v - 1.0 / theta) < 1e-3,
                   "full-mapping equality at theta=" + std::to_string(theta),
                   std::abs(v - 1.0 / theta));
        }
        const double a = two_var_check(map, 0.0, 0.5, quadrature_for_two_var(map, 0.0));
        const double b = prawitz_integral(map, 0.5, quad);
        report(std::abs(a - b) < 1e-6, "two-variable check at w=0 matches", std::abs(a - b));
        // node-doubled companion quadrature as the accuracy estimate
        const double b2 = prawitz_integral(map, 0.5, quad.refined());
        report(std::abs(b - b2) < 1e-4, "node-doubling accuracy estimate at theta=0.5",
               std::abs(b - b2));
        if (!quick) {
            const cplx w(0.3, 0.0);
            const double lhs = two_var_check(map, w, 0.5, quadrature_for_two_var(map, w));
            const double rhs = two_var_rhs(0.5, w);
            report(lhs <= rhs + 1e-3 && rhs - lhs < 1e-3, "two-variable Koebe equality at w=0.3",
                   rhs - lhs);
        }
    }
    {
        std::mt19937 rng(20260810);
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> ua(-0.8, 3.0);
        std::uniform_int_distribution<int> ulen(1, 32), un(1, 4);
        double worst = 0.0;
        const int trials = quick ? 200 : 1000;
        for (int i = 0; i < trials; ++i) {
            std::vector<cplx> c(ulen(rng));
            for (auto& x : c) x = cplx(g(rng), g(rng));
            worst = std::min(worst, asympt_gap(c, ua(rng), un(rng)));
        }
        report(worst >= -1e-12, "derivative-norm gap nonnegative on random sequences", worst);
    }
    {
        const double s1 = sigma_numeric(0.5, 0.25);
        const double e1 = std::abs(s1 - 1.0 / sb::specfun::sigma(0.5, 0.25));
        report(e1 < 1e-4, "sigma double integral (0.5, 0.25)", e1);
        const double s2 = sigma_numeric(0.0, -0.5);
        const double e2 = std::abs(s2 - 1.0 / sb::specfun::sigma(0.0, -0.5));
        report(e2 < 1e-3, "sigma double integral (0, -0.5), singular diagonal", e2);
    }
    std::cout << (failures == 0 ? "verification suite passed\n"
                                : "verification suite FAILED\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"specbound: certified upper bounds for the universal integral means spectrum"};
    app.require_subcommand(1);

    CommonOpts o;
    double t_opt = std::numeric_limits<double>::quiet_NaN();
    double tau_re = std::numeric_limits<double>::quiet_NaN();
    double tau_im = 0.0;
    std::string ts_list;
    double t_min = 0.0, t_max = 0.0, t_step = 0.0;
    double alpha = 0.0, beta = 0.0, theta = 0.5;
    std::string kappa_method = "series";
    bool quick = false;

    auto* bound = app.add_subcommand("bound", "certified bound for one t (or complex tau)");
    bound->add_option("--t", t_opt, "real exponent t (nonzero)");
    bound->add_option("--tau-re", tau_re, "real part of complex tau");
    bound->add_option("--tau-im", tau_im, "imaginary part of complex tau");
    add_common(bound, o);

    auto* table = app.add_subcommand("table", "bounds for a list/range of t values");
    table->add_option("--ts", ts_list, "comma list of t values");
    table->add_option("--t-min", t_min, "range start");
    table->add_option("--t-max", t_max, "range end");
    table->add_option("--t-step", t_step, "range step");
    std::string cert_dir;
    table->add_option("--cert-dir", cert_dir, "directory for per-t certificate files");
    add_common(table, o);

    auto* plot = app.add_subcommand("plot-data", "two-column series for the spectrum graph");
    plot->add_option("--ts", ts_list, "comma list of t values");
    plot->add_option("--t-min", t_min, "range start");
    plot->add_option("--t-max", t_max, "range end");
    plot->add_option("--t-step", t_step, "range step");
    add_common(plot, o);

    auto* verify = app.add_subcommand("verify", "run the quadrature verification suite");
    verify->add_flag("--quick", quick, "smaller sample sizes");

    auto* kappa_cmd = app.add_subcommand("kappa", "print the kappa constant");
    kappa_cmd->add_option("--alpha", alpha, "alpha")->required();
    kappa_cmd->add_option("--theta", theta, "theta in (0,1]")->required();
    kappa_cmd->add_option("--method", kappa_method, "series | hyp4f3");
    kappa_cmd->add_option("--rel-tol", o.rel_tol, "series relative tolerance");
    kappa_cmd->add_option("--max-terms", o.max_terms, "series term budget");

    auto* sigma_cmd = app.add_subcommand("sigma", "print the sigma constant");
    sigma_cmd->add_option("--alpha", alpha, "alpha > -1")->required();
    sigma_cmd->add_option("--beta", beta, "beta > -1")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit with 2; --help with 0
    }

    try {
        if (bound->parsed()) {
            cplx tau;
            if (!std::isnan(t_opt)) {
                tau = cplx(t_opt, 0.0);
            } else if (!std::isnan(tau_re)) {
                tau = cplx(tau_re, tau_im);
            } else {
                std::cerr << "bound: provide --t or --tau-re/--tau-im\n";
                return 2;
            }
            if (tau == cplx(0.0)) {
                std::cerr << "t = 0 is rejected: the spectrum value there is trivially 0\n";
                return 2;
            }
            const auto cfg = make_config(o);
            const auto cert = sb::optimizer::descend(tau, cfg);
            std::cout.precision(10);
            std::cout << "B <= " << cert.beta_final << "  (trivial start " << cert.trivial
                      << ", " << cert.steps.size() << " steps";
            if (!cert.steps.empty())
                std::cout << ", last criterion "
                          << sb::criteria::mode_name(cert.steps.back().criterion);
            std::cout << ")\n";
            if (!o.out.empty()) write_file(o.out, sb::optimizer::serialize(cert));
            return 0;
        }

        if (table->parsed() || plot->parsed()) {
            std::vector<double> ts;
            if (!ts_list.empty()) {
                std::stringstream ss(ts_list);
                std::string item;
                while (std::getline(ss, item, ',')) ts.push_back(std::stod(item));
            } else if (t_step > 0.0) {
                for (double t = t_min; t <= t_max + 1e-12; t += t_step)
                    if (std::abs(t) > 1e-12) ts.push_back(t);
            }
            if (ts.empty()) {
                std::cerr << "table/plot-data: provide --ts or --t-min/--t-max/--t-step\n";
                return 2;
            }
            for (double t : ts)
                if (t == 0.0) {
                    std::cerr << "t = 0 is rejected: the spectrum value there is trivially 0\n";
                    return 2;
                }
            const auto cfg = make_config(o);
            const int jobs = o.jobs > 0 ? o.jobs
                                        : int(std::thread::hardware_concurrency());
            const auto tab = sb::optimizer::build_table(ts, cfg, jobs, o.timings);
            std::string content;
            if (plot->parsed()) {
                content = config_echo(cfg) + sb::optimizer::plot_data(tab);
            } else if (o.format == "text") {
                content = config_echo(cfg) + table_text_pretty(tab);
            } else {
                content = config_echo(cfg) + sb::optimizer::table_to_text(tab);
            }
            if (o.out.empty()) {
                std::cout << content;
            } else {
                write_file(o.out, content);
            }
            if (table->parsed() && !cert_dir.empty()) {
                std::filesystem::create_directories(cert_dir);
                for (const auto& r : tab.rows) {
                    std::ostringstream name;
                    name << cert_dir << "/t_" << r.t << ".cert";
                    write_file(name.str(), sb::optimizer::serialize(r.certificate));
                }
            }
            return 0;
        }

        if (verify->parsed()) return run_verify(quick);

        if (kappa_cmd->parsed()) {
            sb::SeriesControl ctl;
            ctl.rel_tol = o.rel_tol;
            ctl.max_terms = o.max_terms;
            const auto method = kappa_method == "hyp4f3" ? sb::specfun::KappaMethod::hyp4f3
                                                         : sb::specfun::KappaMethod::series;
            std::cout.precision(15);
            std::cout << sb::specfun::kappa(alpha, theta, ctl, method) << "\n";
            return 0;
        }

        if (sigma_cmd->parsed()) {
            std::cout.precision(15);
            std::cout << sb::specfun::sigma(alpha, beta) << "\n";
            return 0;
        }
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
