#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "CLI11.hpp"
#include "cli_support.hpp"

using namespace basym;
using namespace basym::cli;

namespace {

struct Common {
    std::string policy_file;
    std::optional<double> precision;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--policy-file", c.policy_file, "key = value overrides for the dispatch policy");
    cmd->add_option("--precision", c.precision, "target relative error");
}

std::optional<int> requested_terms(std::optional<int> terms, const Settings& s) {
    return terms ? terms : s.precision.max_terms;
}

// eval ---------------------------------------------------------------------

struct EvalArgs {
    Common common;
    double nu = 0, x = 0;
    std::string method = "auto";
    std::optional<int> terms;
    int oracle_digits = 20;
    bool no_oracle = false;
};

int run_eval(const EvalArgs& a) {
    const Settings s = load_settings(a.common.policy_file, a.common.precision);
    const MethodChoice choice = parse_method(a.method);
    const BesselQuery q(a.nu, a.x, s.precision);
    const Regime regime = classify(a.nu, a.x, s.dispatch);

    const auto t0 = std::chrono::steady_clock::now();
    ExpansionResult r = run_choice(choice, q, s.dispatch, requested_terms(a.terms, s));
    const auto us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();

    std::cout << "nu: " << num(a.nu) << "\n"
              << "x: " << num(a.x) << "\n"
              << "regime: " << to_string(regime.tag) << " (margin " << short_num(regime.margin) << ")\n"
              << "method: " << to_string(r.method) << "\n"
              << "value: " << num(r.value) << "\n"
              << "terms_used: " << r.terms_used << "\n";
    if (r.est_error)
        std::cout << "est_error: " << short_num(*r.est_error) << (r.rigorous ? " (rigorous)" : " (heuristic)") << "\n";
    else
        std::cout << "est_error: unavailable\n";
    std::cout << "warnings: " << warning_list(r.warnings) << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", us);
    std::cout << "elapsed_us: " << buf << "\n";

    if (!a.no_oracle) {
        if (oracle_within_cap(a.x, a.oracle_digits)) {
            const double exact = exact_J(a.nu, a.x, a.oracle_digits).to_double();
            std::cout << "oracle: " << num(exact) << " (" << a.oracle_digits << " digits)\n";
            const double err = std::fabs(r.value - exact);
            std::cout << "abs_error: " << short_num(err) << "\n";
            if (exact != 0) std::cout << "rel_error: " << short_num(err / std::fabs(exact)) << "\n";
        } else {
            std::cout << "oracle: out of range\n";
        }
    }
    return 0;
}

// scan ---------------------------------------------------------------------

struct ScanArgs {
    Common common;
    double nu = 0;
    std::string x;
    std::string methods = "auto";
    std::string oracle = "off";
    std::string output;
    int oracle_digits = 20;
    unsigned threads = 0;
    bool timing = false;
    std::optional<int> terms;
};

struct Cell {
    std::optional<double> value;
    std::optional<double> rel;
    std::string error;
};

struct Row {
    double x = 0;
    std::string auto_method;
    std::optional<double> auto_value;
    std::optional<double> oracle;
    std::vector<Cell> cells;
    std::string status = "ok";
    double elapsed_us = 0;
};

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }
std::string opt_short(const std::optional<double>& v) { return v ? short_num(*v) : std::string(); }

Row scan_point(double nu, double x, const std::vector<MethodChoice>& methods, bool oracle, int digits,
               const Settings& s, std::optional<int> terms) {
    Row row;
    row.x = x;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    const BesselQuery q(nu, x, s.precision);
    try {
        const auto r = eval_J(q, s.dispatch);
        row.auto_method = std::string(to_string(r.method));
        row.auto_value = r.value;
        if (r.has(BestEffort)) failures.push_back("auto:BestEffort");
    } catch (const Error& e) {
        row.auto_method = "none";
        failures.push_back("auto:" + std::string(to_string(e.kind())));
    }
    double scale = 0;
    if (oracle) {
        row.oracle = exact_J(nu, x, digits).to_double();
        scale = std::fabs(*row.oracle);
    }
    for (const auto& m : methods) {
        Cell c;
        try {
            const auto r = run_choice(m, q, s.dispatch, terms);
            c.value = r.value;
            if (row.oracle) {
                c.rel = scale > 0 ? std::fabs(r.value - *row.oracle) / scale : std::fabs(r.value);
            }
        } catch (const Error& e) {
            failures.push_back(m.name + ":" + std::string(to_string(e.kind())));
        }
        row.cells.push_back(c);
    }
    row.elapsed_us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    if (!failures.empty()) {
        row.status = "partial";
        for (const auto& f : failures) row.status += ";" + f;
    }
    return row;
}

template <class F>
void parallel_for(size_t n, unsigned threads, F&& f) {
    unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<size_t>(nt, std::max<size_t>(n, 1)));
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (size_t i = next++; i < n && !failed; i = next++) {
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

int run_scan(const ScanArgs& a) {
    const Settings s = load_settings(a.common.policy_file, a.common.precision);
    if (!std::isfinite(a.nu) || a.nu < 0) throw Error(ErrorKind::InvalidInput, "--nu must be finite and >= 0");
    const Grid grid = parse_grid(a.x, false);
    const auto methods = parse_method_list(a.methods);
    if (a.oracle != "on" && a.oracle != "off") throw Error(ErrorKind::InvalidInput, "--oracle takes on or off");
    const bool oracle = a.oracle == "on";
    if (oracle) {
        for (double x : grid.points)
            if (!oracle_within_cap(x, a.oracle_digits))
                throw Error(ErrorKind::CapExceeded, "oracle cap exceeded at x=" + num(x) +
                                                        "; rerun with --oracle off");
    }

    std::vector<Row> rows(grid.points.size());
    const auto terms = requested_terms(a.terms, s);
    parallel_for(rows.size(), a.threads, [&](size_t i) {
        rows[i] = scan_point(a.nu, grid.points[i], methods, oracle, a.oracle_digits, s, terms);
    });

    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) throw Error(ErrorKind::InvalidInput, "cannot write '" + a.output + "'");
    }
    std::ostream& os = a.output.empty() ? std::cout : file;
    os << "# basym " << kVersion << "\n"
       << "# nu=" << num(a.nu) << " x=" << a.x << " methods=" << a.methods << " oracle=" << a.oracle;
    if (oracle) os << " oracle_digits=" << a.oracle_digits;
    os << "\n# policy " << policy_summary(s) << "\n"
       << "# machine " << machine_summary() << "\n";
    os << "x,auto_method,auto_value";
    if (oracle) os << ",oracle_value";
    for (const auto& m : methods) {
        os << "," << m.name << "_value";
        if (oracle) os << "," << m.name << "_relerr";
    }
    os << ",status";
    if (a.timing) os << ",elapsed_us";
    os << "\n";
    int partial = 0;
    for (const auto& r : rows) {
        os << num(r.x) << "," << r.auto_method << "," << opt_num(r.auto_value);
        if (oracle) os << "," << opt_num(r.oracle);
        for (const auto& c : r.cells) {
            os << "," << opt_num(c.value);
            if (oracle) os << "," << opt_short(c.rel);
        }
        os << "," << r.status;
        if (a.timing) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.1f", r.elapsed_us);
            os << "," << buf;
        }
        os << "\n";
        if (r.status != "ok") ++partial;
    }
    if (partial) std::cerr << partial << " of " << rows.size() << " rows are partial\n";
    return 0;
}

// bench --------------------------------------------------------------------

struct BenchArgs {
    Common common;
    double nu = 300;
    std::string x = "150:150:1";
    std::string methods = "auto";
    int repeats = 20;
    int warmup = 3;
    int oracle_digits = 20;
    bool compare_oracle = true;
};

double percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const size_t idx = static_cast<size_t>(std::ceil(p * static_cast<double>(v.size()))) - 1;
    return v[std::min(idx, v.size() - 1)];
}

int run_bench(const BenchArgs& a) {
    const Settings s = load_settings(a.common.policy_file, a.common.precision);
    if (a.repeats < 1 || a.warmup < 0) throw Error(ErrorKind::InvalidInput, "repeats must be >= 1, warmup >= 0");
    Grid grid;
    if (a.x.find(':') != std::string::npos) {
        grid = parse_grid(a.x, true);
        // a single-point grid start:start:step is allowed
        if (grid.points.empty() && grid.start == grid.stop) grid.points.push_back(grid.start);
    } else {
        grid.points.push_back(parse_real(a.x, "--x"));
    }
    const auto methods = parse_method_list(a.methods);
    std::cout << "# basym " << kVersion << " bench\n"
              << "# machine " << machine_summary() << "\n"
              << "# nu=" << num(a.nu) << " x=" << a.x << " repeats=" << a.repeats << " warmup=" << a.warmup << "\n";
    if (grid.points.empty()) {
        std::cout << "# empty grid\n";
        return 0;
    }
    auto time_one = [](auto&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    };
    std::cout << "method,points,samples,failures,median_us,p99_us\n";
    std::map<std::string, double> medians;
    for (const auto& m : methods) {
        std::vector<double> samples;
        int failures = 0;
        for (double x : grid.points) {
            const BesselQuery q(a.nu, x, s.precision);
            bool ok = true;
            for (int w = 0; w < a.warmup && ok; ++w) {
                try {
                    run_choice(m, q, s.dispatch);
                } catch (const Error&) {
                    ok = false;
                }
            }
            if (!ok) {
                ++failures;
                continue;
            }
            for (int r = 0; r < a.repeats; ++r) samples.push_back(time_one([&] { run_choice(m, q, s.dispatch); }));
        }
        if (samples.empty()) {
            std::cout << m.name << "," << grid.points.size() << ",0," << failures << ",,\n";
            continue;
        }
        const double med = percentile(samples, 0.5);
        medians[m.name] = med;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", med, percentile(samples, 0.99));
        std::cout << m.name << "," << grid.points.size() << "," << samples.size() << "," << failures << "," << buf
                  << "\n";
    }
    if (a.compare_oracle) {
        std::vector<double> samples;
        for (double x : grid.points) {
            if (!oracle_within_cap(x, a.oracle_digits)) continue;
            for (int w = 0; w < a.warmup; ++w) exact_J(a.nu, x, a.oracle_digits);
            for (int r = 0; r < a.repeats; ++r)
                samples.push_back(time_one([&] { exact_J(a.nu, x, a.oracle_digits); }));
        }
        if (!samples.empty()) {
            const double med = percentile(samples, 0.5);
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f", med, percentile(samples, 0.99));
            std::cout << "oracle" << a.oracle_digits << ",," << samples.size() << ",0," << buf << "\n";
            for (const auto& [name, m] : medians) {
                std::snprintf(buf, sizeof buf, "%.1f", m > 0 ? med / m : 0.0);
                std::cout << "# oracle/" << name << " median ratio " << buf << "\n";
            }
        }
    }
    return 0;
}

// gw -----------------------------------------------------------------------

struct GwArgs {
    Common common;
    std::string file;
    std::string csv;
    size_t top = 10;
    unsigned threads = 0;
};

int run_gw(const GwArgs& a) {
    const Settings s = load_settings(a.common.policy_file, a.common.precision);
    std::ifstream in(a.file);
    if (!in) throw Error(ErrorKind::MalformedFile, "cannot open '" + a.file + "'");
    const GwParams p = read_gw_params(in);
    FtOptions opt;
    opt.precision = s.precision;
    opt.dispatch = s.dispatch;
    opt.keep_terms = !a.csv.empty();
    opt.top = a.top;
    opt.threads = a.threads;
    const auto t0 = std::chrono::steady_clock::now();
    const FtResult r = ft_signal(p, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::cout << "bessel_arg: " << num(p.bessel_arg()) << "\n"
              << "k: " << num(p.k()) << "\n"
              << "n_range: [" << p.n_min << ", " << p.n_max << "]  l_max: " << p.l_max << "\n"
              << "total: " << num(r.total.real()) << " " << (r.total.imag() < 0 ? "- " : "+ ")
              << num(std::fabs(r.total.imag())) << "i\n"
              << "abs_total: " << num(std::abs(r.total)) << "\n"
              << "tail_estimate: " << short_num(r.tail_estimate) << "\n"
              << "bessel_methods:";
    for (const auto& [m, count] : r.bessel_methods) std::cout << " " << to_string(m) << "=" << count;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", secs);
    std::cout << "\nelapsed_s: " << buf << "\n";
    if (!r.top.empty()) {
        std::cout << "top terms (n, l, m, |product|):\n";
        for (const auto& t : r.top)
            std::cout << "  " << t.n << " " << t.l << " " << t.m << " " << short_num(std::abs(t.product)) << "\n";
    }
    if (r.truncation_warning)
        std::cerr << "warning: TruncationWarning, l_max shell contributes " << short_num(r.tail_estimate)
                  << " against |total| " << short_num(std::abs(r.total)) << "\n";
    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + a.csv + "'");
        write_terms_csv(out, r.terms);
    }
    return 0;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput:
        case ErrorKind::MalformedFile:
        case ErrorKind::CapExceeded:
        case ErrorKind::PoleInParameters: return 2;
        default: return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic Bessel J evaluation near the transition region"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate J_nu(x) once");
    eval->add_option("nu", ea.nu, "order")->required();
    eval->add_option("x", ea.x, "argument")->required();
    eval->add_option("--method", ea.method,
                     "auto|meissel1|meissel2|meissel3|debye-below|debye-above|epsilon|watson|watson-below|"
                     "watson-above|oracle|series");
    eval->add_option("--terms", ea.terms, "truncation order");
    eval->add_option("--oracle-digits", ea.oracle_digits, "digits for the comparison value");
    eval->add_flag("--no-oracle", ea.no_oracle, "skip the oracle comparison");
    add_common(eval, ea.common);

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan", "evaluate over an argument grid, CSV out");
    scan->add_option("--nu", sa.nu, "order")->required();
    scan->add_option("--x", sa.x, "start:stop:step")->required();
    scan->add_option("--methods", sa.methods, "comma separated method names");
    scan->add_option("--oracle", sa.oracle, "on|off");
    scan->add_option("--output,-o", sa.output, "CSV path (default stdout)");
    scan->add_option("--oracle-digits", sa.oracle_digits);
    scan->add_option("--threads", sa.threads);
    scan->add_option("--terms", sa.terms, "truncation order for forced methods");
    scan->add_flag("--timing", sa.timing, "append an elapsed_us column");
    add_common(scan, sa.common);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "latency per method");
    bench->add_option("--nu", ba.nu);
    bench->add_option("--x", ba.x, "value or start:stop:step");
    bench->add_option("--methods", ba.methods);
    bench->add_option("--repeats", ba.repeats);
    bench->add_option("--warmup", ba.warmup);
    bench->add_option("--oracle-digits", ba.oracle_digits);
    bench->add_flag("!--no-oracle", ba.compare_oracle, "skip the oracle timing");
    add_common(bench, ba.common);

    GwArgs ga;
    auto* gw = app.add_subcommand("gw", "Fourier transform of the detector signal");
    gw->add_option("file", ga.file, "parameter file")->required();
    gw->add_option("--csv", ga.csv, "write every term to this path");
    gw->add_option("--top", ga.top, "largest terms to list");
    gw->add_option("--threads", ga.threads);
    add_common(gw, ga.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*eval) return run_eval(ea);
        if (*scan) return run_scan(sa);
        if (*bench) return run_bench(ba);
        if (*gw) return run_gw(ga);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
