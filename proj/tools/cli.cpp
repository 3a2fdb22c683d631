#include "cli.hpp"

#include <chrono>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "munu/analytic.hpp"
#include "munu/arith.hpp"
#include "munu/errors.hpp"
#include "munu/experiments.hpp"
#include "munu/report.hpp"
#include "munu/stepfn.hpp"

namespace munu::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string out_dir = ".";
    std::string basename;  // default: <subcommand>-<UTC timestamp>
    std::string cache;     // default: $MOBIUS_NU_CACHE if set
    unsigned threads = 0;  // 0 = all hardware threads
    std::uint64_t max_table_bytes = std::uint64_t{1} << 31;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out_dir, "Directory for CSV/JSON outputs")
        ->capture_default_str();
    cmd->add_option("--basename", c.basename,
                    "Output file stem (default: <subcommand>-<UTC timestamp>)");
    cmd->add_option("--cache", c.cache,
                    "Sieve cache file (MUNV0001 format); MOBIUS_NU_CACHE overrides the default");
    cmd->add_option("--threads", c.threads,
                    "Worker threads for scans/sieving, 0 = auto; results do not depend on it")
        ->capture_default_str();
    cmd->add_option("--max-table-bytes", c.max_table_bytes,
                    "Memory budget for the mu table")
        ->capture_default_str();
}

std::string cache_path(const Common& c) {
    if (!c.cache.empty()) return c.cache;
    if (const char* env = std::getenv("MOBIUS_NU_CACHE")) return env;
    return {};
}

std::string utc_stamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

MobiusTable obtain_table(std::uint64_t limit, const Common& c, std::ostream& out) {
    const std::string path = cache_path(c);
    if (!path.empty() && fs::exists(path)) {
        MobiusTable t = load_mobius_cache(path);
        if (t.limit >= limit) {
            out << "loaded cache: " << path << " (N=" << t.limit << ")\n";
            return t;
        }
        out << "cache " << path << " holds N=" << t.limit << " < " << limit
            << ", sieving fresh\n";
    }
    SieveOptions opt;
    opt.threads = c.threads;
    opt.max_table_bytes = c.max_table_bytes;
    return mobius_sieve(limit, opt);
}

std::string study_basename(const Common& c, const std::string& sub) {
    return c.basename.empty() ? sub + "-" + utc_stamp() : c.basename;
}

int finish_study(const StudyReport& rep, const Common& c, std::ostream& out) {
    fs::create_directories(c.out_dir);
    const std::string stem = study_basename(c, rep.study);
    const fs::path csv_path = fs::path(c.out_dir) / (stem + ".csv");
    const fs::path json_path = fs::path(c.out_dir) / (stem + ".json");
    {
        std::ofstream os(csv_path, std::ios::binary);
        rep.write_csv(os);
    }
    {
        std::ofstream os(json_path, std::ios::binary);
        os << rep.summary_json().dump(2) << '\n';
    }
    std::size_t passed = 0;
    for (const Assertion& a : rep.assertions) passed += a.pass;
    out << "assertions: " << passed << "/" << rep.assertions.size() << " passed\n";
    for (const Assertion& a : rep.assertions)
        if (!a.pass)
            out << "FAIL " << a.name << " lhs=" << fmt_real(a.lhs)
                << " rhs=" << fmt_real(a.rhs) << '\n';
    out << "wrote: " << csv_path.string() << '\n';
    out << "wrote: " << json_path.string() << '\n';
    out << "RESULT: " << (rep.pass() ? "PASS" : "FAIL") << '\n';
    return rep.pass() ? 0 : 1;
}

void check_envelope(const std::vector<double>& ts) {
    for (double t : ts)
        if (std::abs(t) > kMaxImag)
            throw std::invalid_argument("|t| exceeds the supported envelope of 1000");
}

std::uint64_t max_of(const std::vector<std::uint64_t>& v) {
    std::uint64_t m = 0;
    for (auto x : v) m = std::max(m, x);
    return m;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "munu: exact and numerical studies of the Mobius/step-function convolution\n"
        "f_n(x) = sum_{k<=n} mu(k) nu(x/k) with nu(x) = floor(x) mod 2.\n"
        "Complex arguments are supported for sigma > 0, |t| <= 1000."};
    app.require_subcommand(1);
    int rc = 0;

    // sieve
    Common sieve_c;
    std::uint64_t sieve_limit = 1000000;
    std::uint64_t sieve_segment = std::uint64_t{1} << 22;
    bool sieve_force_segmented = false;
    {
        auto* cmd = app.add_subcommand(
            "sieve", "Build the mu(1..N) table and optionally write the cache file");
        add_common(cmd, sieve_c);
        cmd->add_option("--limit", sieve_limit, "Table size N (entries, >= 1)")
            ->capture_default_str();
        cmd->add_option("--segment-size", sieve_segment,
                        "Entries per segment in segmented mode")
            ->capture_default_str();
        cmd->add_flag("--segmented", sieve_force_segmented,
                      "Force segmented sieving regardless of N");
        cmd->callback([&] {
            MobiusTable t;
            if (sieve_force_segmented) {
                if (sieve_limit + 1 > sieve_c.max_table_bytes)
                    throw resource_error("sieve: table exceeds the memory budget");
                t = mobius_sieve_segmented(sieve_limit, sieve_segment,
                                           sieve_c.threads);
            } else {
                SieveOptions opt;
                opt.segment_size = sieve_segment;
                opt.threads = sieve_c.threads;
                opt.max_table_bytes = sieve_c.max_table_bytes;
                t = mobius_sieve(sieve_limit, opt);
            }
            out << "N=" << t.limit << " mertens=" << mertens(t, t.limit)
                << " squarefree=" << squarefree_count(t, t.limit) << '\n';
            const std::string path = cache_path(sieve_c);
            if (!path.empty()) {
                save_mobius_cache(t, path);
                out << "wrote cache: " << path << '\n';
            }
            rc = 0;
        });
    }

    // nu
    double nu_x = 0.0;
    {
        auto* cmd = app.add_subcommand("nu", "Print nu(x) = floor(x) mod 2 for x >= 0");
        cmd->add_option("--x", nu_x, "Argument x (finite, >= 0)")->required();
        cmd->callback([&] {
            out << nu(nu_x) << '\n';
            rc = 0;
        });
    }

    // fvalue
    Common fv_c;
    std::uint64_t fv_n = 1;
    double fv_x = 0.0;
    std::uint64_t fv_limit = 0;
    std::uint64_t fv_lo = 0, fv_hi = 0;
    {
        auto* cmd = app.add_subcommand(
            "fvalue", "Print f_n(x); optionally export a profile window as CSV");
        add_common(cmd, fv_c);
        cmd->add_option("--n", fv_n, "Truncation index n (>= 1)")->required();
        cmd->add_option("--x", fv_x, "Argument x (finite, >= 0)")->required();
        cmd->add_option("--limit", fv_limit, "Table size (default: n)");
        cmd->add_option("--profile-lo", fv_lo, "Window start for CSV export (integer m)");
        cmd->add_option("--profile-hi", fv_hi, "Window end, exclusive; requires --profile-lo");
        cmd->callback([&] {
            const std::uint64_t limit = fv_limit ? fv_limit : fv_n;
            const MobiusTable t = obtain_table(limit, fv_c, out);
            const StepEvaluator ev(t);
            out << ev.value(fv_n, fv_x) << '\n';
            if (fv_hi > fv_lo) {
                const StepProfile p = ev.profile(fv_n, fv_lo, fv_hi, fv_c.threads);
                fs::create_directories(fv_c.out_dir);
                const fs::path path = fs::path(fv_c.out_dir) /
                                      (study_basename(fv_c, "fvalue") + ".csv");
                std::ofstream os(path, std::ios::binary);
                write_profile_csv(p, os);
                out << "wrote: " << path.string() << '\n';
            }
            rc = 0;
        });
    }

    // verify-thm2
    Common thm2_c;
    std::uint64_t thm2_mmax = 100000, thm2_samples = 1000, thm2_seed = 12345;
    std::uint64_t thm2_limit = 0;
    {
        auto* cmd = app.add_subcommand(
            "verify-thm2",
            "Verify f_{floor(x)}(x) = 0 on [0,1), 1 on [1,2), -1 on [2, m_max] exactly");
        add_common(cmd, thm2_c);
        cmd->add_option("--m-max", thm2_mmax, "Largest integer checked")
            ->capture_default_str();
        cmd->add_option("--samples", thm2_samples, "Random real probes in [0, m_max)")
            ->capture_default_str();
        cmd->add_option("--seed", thm2_seed, "Seed for the real probes")
            ->capture_default_str();
        cmd->add_option("--limit", thm2_limit, "Table size (default: m_max)");
        cmd->callback([&] {
            const std::uint64_t limit = thm2_limit ? thm2_limit : thm2_mmax;
            const MobiusTable t = obtain_table(limit, thm2_c, out);
            const StepEvaluator ev(t);
            rc = finish_study(verify_limit_values(ev, thm2_mmax, thm2_samples, thm2_seed),
                              thm2_c, out);
        });
    }

    // verify-eq8
    Common eq8_c;
    std::vector<std::uint64_t> eq8_nset = {1, 5, 10, 100};
    std::vector<double> eq8_sigmas = {0.3, 0.5, 0.75, 1.5};
    std::vector<double> eq8_ts = {0, 1, 10, 50};
    std::uint64_t eq8_upper = 1000000;
    double eq8_tol = kDefaultEtaTol;
    {
        auto* cmd = app.add_subcommand(
            "verify-eq8",
            "Dual-path check: exact truncated integral of (1+f_n(x))x^{-s-1} over [2, X] "
            "against eta(s)/s * sum mu(k)k^{-s} - (1-2^{1-s})/s");
        add_common(cmd, eq8_c);
        cmd->add_option("--n-set", eq8_nset, "Truncation indices")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--sigma-set", eq8_sigmas, "Re(s) values, each > 0")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--t-set", eq8_ts, "Im(s) values, |t| <= 1000")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--upper", eq8_upper, "Integral truncation X (> max n)")
            ->capture_default_str();
        cmd->add_option("--tol", eq8_tol, "eta tolerance (>= 1e-14)")
            ->capture_default_str();
        cmd->callback([&] {
            check_envelope(eq8_ts);
            const MobiusTable t = obtain_table(max_of(eq8_nset), eq8_c, out);
            const StepEvaluator ev(t);
            rc = finish_study(
                verify_integral_identity(ev, eq8_nset, make_s_grid(eq8_sigmas, eq8_ts),
                                         eq8_upper, eq8_tol),
                eq8_c, out);
        });
    }

    // eta
    double eta_sigma = 0.0, eta_t = 0.0, eta_tol = kDefaultEtaTol;
    std::uint64_t eta_upper = 0;
    {
        auto* cmd = app.add_subcommand(
            "eta", "Evaluate eta(s) by accelerated series (and truncated integral with --upper)");
        cmd->add_option("--sigma", eta_sigma, "Re(s), must be > 0")->required();
        cmd->add_option("--t", eta_t, "Im(s), |t| <= 1000")->capture_default_str();
        cmd->add_option("--tol", eta_tol, "Series tolerance (>= 1e-14)")
            ->capture_default_str();
        cmd->add_option("--upper", eta_upper,
                        "Even truncation X for the integral method (0 = skip)");
        cmd->callback([&] {
            const complex s{eta_sigma, eta_t};
            const EtaEval e = eta_series(s, eta_tol);
            out << "eta_series: " << fmt_real(e.value.real()) << " + "
                << fmt_real(e.value.imag()) << "i  (bound " << fmt_real(e.abs_error_bound)
                << ", terms " << e.terms << ")\n";
            if (eta_upper) {
                const EtaEval m = eta_mellin_truncated(s, eta_upper);
                out << "eta_mellin: " << fmt_real(m.value.real()) << " + "
                    << fmt_real(m.value.imag()) << "i  (bound "
                    << fmt_real(m.abs_error_bound) << ", X " << eta_upper << ")\n";
            }
            rc = 0;
        });
    }

    // residuals
    Common res_c;
    std::vector<std::uint64_t> res_nset = {10, 100, 1000, 10000};
    std::vector<double> res_sigmas = {0.3, 0.5, 0.75, 1.5};
    std::vector<double> res_ts = {0, 1, 10, 50};
    double res_wf = 10.0, res_tol = kDefaultEtaTol;
    {
        auto* cmd = app.add_subcommand(
            "residuals",
            "Residual |eta(s)/s * sum mu(k)k^{-s} - (1-2^{1-s})/s| per (n, s) with "
            "rigorous and windowed bounds; asserts lhs <= rigorous bound");
        add_common(cmd, res_c);
        cmd->add_option("--n-set", res_nset, "Truncation indices")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--sigma-set", res_sigmas, "Re(s) values, each > 0")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--t-set", res_ts, "Im(s) values, |t| <= 1000")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--window-factor", res_wf, "Scan window x_max = ceil(factor*n), > 1")
            ->capture_default_str();
        cmd->add_option("--tol", res_tol, "eta tolerance (>= 1e-14)")
            ->capture_default_str();
        cmd->callback([&] {
            check_envelope(res_ts);
            const MobiusTable t = obtain_table(max_of(res_nset), res_c, out);
            const StepEvaluator ev(t);
            rc = finish_study(residual_suite(ev, res_nset, make_s_grid(res_sigmas, res_ts),
                                             res_wf, res_tol, res_c.threads),
                              res_c, out);
        });
    }

    // converge
    Common cv_c;
    double cv_sigma = 2.0, cv_t = 0.0, cv_tol = kDefaultEtaTol;
    std::vector<std::uint64_t> cv_grid = {100, 1000, 10000, 100000, 1000000};
    {
        auto* cmd = app.add_subcommand(
            "converge",
            "Partial Mobius Dirichlet sums along an n grid against (1-2^{1-s})/eta(s); "
            "asserts only that the final residual is below the first");
        add_common(cmd, cv_c);
        cmd->add_option("--sigma", cv_sigma, "Re(s), must be > 0")->capture_default_str();
        cmd->add_option("--t", cv_t, "Im(s), |t| <= 1000")->capture_default_str();
        cmd->add_option("--n-grid", cv_grid, "Ascending n grid")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--tol", cv_tol, "eta tolerance (>= 1e-14)")
            ->capture_default_str();
        cmd->callback([&] {
            check_envelope({cv_t});
            const MobiusTable t = obtain_table(max_of(cv_grid), cv_c, out);
            rc = finish_study(
                convergence_study(t, complex{cv_sigma, cv_t}, cv_grid, cv_tol), cv_c, out);
        });
    }

    // growth
    Common gr_c;
    std::vector<std::uint64_t> gr_grid = {10, 100, 1000, 10000};
    double gr_wf = 10.0;
    {
        auto* cmd = app.add_subcommand(
            "growth",
            "Windowed sup|f_n| over [1, ceil(factor*n)) per n, log-log exponent fit, "
            "normalized proxies, window sensitivity");
        add_common(cmd, gr_c);
        cmd->add_option("--n-grid", gr_grid, "Ascending n grid")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--window-factor", gr_wf, "Scan window factor, > 1")
            ->capture_default_str();
        cmd->callback([&] {
            const MobiusTable t = obtain_table(max_of(gr_grid), gr_c, out);
            const StepEvaluator ev(t);
            const GrowthStudy st = growth_study(ev, gr_grid, gr_wf, gr_c.threads);
            if (st.fit.has_fit)
                out << "fit: exponent=" << fmt_real(st.fit.exponent)
                    << " intercept=" << fmt_real(st.fit.intercept)
                    << " r_squared=" << fmt_real(st.fit.r_squared) << '\n';
            else
                out << "fit: not computed (fewer than 3 points)\n";
            rc = finish_study(st.report, gr_c, out);
        });
    }

    // bounds
    Common bd_c;
    std::vector<std::uint64_t> bd_grid = {10, 100, 1000, 10000, 100000};
    std::vector<double> bd_sigmas = {0.6, 0.75, 0.9, 1.0};
    std::uint64_t bd_upper = 10000;
    {
        auto* cmd = app.add_subcommand(
            "bounds",
            "Coefficient bounds: sum |mu(k)|/k^sigma against the closed form for every "
            "n <= max(n-grid), and the exact truncated integral of |f_n(x)|x^{-sigma-1} "
            "against eta(sigma)/sigma * sum |mu(k)|k^{-sigma}");
        add_common(cmd, bd_c);
        cmd->add_option("--n-grid", bd_grid, "Ascending n grid (sweep runs to its max)")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--sigma-set", bd_sigmas, "sigma values, each > 0")
            ->delimiter(',')->capture_default_str();
        cmd->add_option("--upper", bd_upper, "Integral truncation X (>= 2)")
            ->capture_default_str();
        cmd->callback([&] {
            const MobiusTable t = obtain_table(max_of(bd_grid), bd_c, out);
            const StepEvaluator ev(t);
            rc = finish_study(bound_sweep(ev, bd_grid, bd_sigmas, bd_upper, bd_c.threads),
                              bd_c, out);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const bool help = e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp";
        app.exit(e, out, err);
        return help ? 0 : 2;
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const accuracy_error& e) {
        err << "accuracy error: " << e.what() << '\n';
        return 3;
    } catch (const near_zero_error& e) {
        err << "accuracy error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return rc;
}

} // namespace munu::cli
