// Acceptance criteria AC1..AC11. Each prints one PASS/FAIL line; exit status
// is nonzero when the selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "basym/basym.hpp"

using namespace basym;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double oracle(double nu, double x) { return exact_J(nu, x, 25).to_double(); }

template <class F>
double median_us(int reps, F&& f) {
    std::vector<double> t;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        f();
        t.push_back(std::chrono::duration<double, std::micro>(Clock::now() - t0).count());
    }
    std::nth_element(t.begin(), t.begin() + reps / 2, t.end());
    return t[reps / 2];
}

Outcome ac1() {
    const auto t0 = Clock::now();
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> nu_d(0.0, 350.0), x_d(0.01, 350.0);
    const int d = 30;
    double worst = 0, worst_res = 0;
    for (int i = 0; i < 100; ++i) {
        const double nu = nu_d(g), x = x_d(g);
        const auto a = exact_J(nu, x, d), b = exact_J_backward(nu, x, d);
        worst = std::max(worst, mp::abs((a.value - b.value) / b.value).to_double());
    }
    std::uniform_int_distribution<int> n_d(1, 349);
    for (int i = 0; i < 20; ++i) {
        const int n = n_d(g);
        const double x = x_d(g);
        const auto jm = exact_J(n - 1, x, d).value, j0 = exact_J(n, x, d).value, jp = exact_J(n + 1, x, d).value;
        const mp::Float res = mp::abs(jm + jp - j0 * (2.0 * n) / mp::Float(x, j0.prec()));
        const mp::Float big = std::max({mp::abs(jm), mp::abs(j0), mp::abs(jp)});
        worst_res = std::max(worst_res, (res / big).to_double());
    }
    const double secs = seconds_since(t0);
    const bool pass = worst < std::pow(10.0, 1 - d) && worst_res < std::pow(10.0, 2 - d) && secs < 60;
    return {pass, "series vs recurrence max rel diff " + fmt("%.1e", worst) + " (limit 1e-29), residual " +
                      fmt("%.1e", worst_res) + " (limit 1e-28), " + fmt("%.1f s", secs)};
}

Outcome ac2() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string d = "rel err";
    for (double x : {100.0, 150.0, 200.0, 250.0, 280.0}) {
        const double e = rel(meissel_first(BesselQuery(300, x)).value, oracle(300, x));
        ok = ok && e < 1e-8;
        d += " x=" + fmt("%g", x) + ":" + fmt("%.1e", e);
    }
    double worst = 0, at = 0;
    for (double x = 290; x <= 299; x += 1) {
        const double e = rel(meissel_first(BesselQuery(300, x)).value, oracle(300, x));
        if (e > worst) worst = e, at = x;
    }
    const double secs = seconds_since(t0);
    ok = ok && worst > 1e-4 && secs < 30;
    return {ok, d + " (limit 1e-8); breakdown max " + fmt("%.1e", worst) + " at x=" + fmt("%g", at) +
                    " (needs > 1e-4); " + fmt("%.2f s", secs)};
}

Outcome ac3() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string d = "rel err";
    for (double x : {315.0, 320.0, 350.0, 400.0}) {
        const double e = rel(meissel_second(BesselQuery(300, x)).value, oracle(300, x));
        ok = ok && e < 1e-6;
        d += " x=" + fmt("%g", x) + ":" + fmt("%.1e", e);
    }
    double worst = 0;
    for (double x = 300.5; x <= 310; x += 0.5)
        worst = std::max(worst, rel(meissel_second(BesselQuery(300, x)).value, oracle(300, x)));
    const double secs = seconds_since(t0);
    ok = ok && worst > 1e-6 && secs < 30;
    return {ok, d + " (limit 1e-6); max in (300, 310] " + fmt("%.1e", worst) + " (needs > 1e-6); " +
                    fmt("%.2f s", secs)};
}

Outcome ac4() {
    const double e = rel(meissel_third(300, 7).value, oracle(300, 300));
    const double n = 300;
    const double closed = std::tgamma(1.0 / 3) / (std::pow(2.0, 2.0 / 3) * std::pow(3.0, 1.0 / 6) * M_PI * std::cbrt(n));
    const double e1 = rel(meissel_third(n, 0).value, closed);
    return {e < 1e-10 && e1 < 4 * std::numeric_limits<double>::epsilon(),
            "seven terms rel err " + fmt("%.1e", e) + " (limit 1e-10); one term vs closed form " + fmt("%.1e", e1)};
}

Outcome ac5() {
    bool ok = true;
    std::string bad;
    double worst = 0;
    for (int x = 288; x <= 314; ++x) {
        const double e = rel(epsilon_expansion(BesselQuery(300, x)).value, oracle(300, x));
        worst = std::max(worst, e);
        if (e >= 1e-4) {
            ok = false;
            bad += " " + std::to_string(x) + ":" + fmt("%.1e", e);
        }
    }
    const double e286 = rel(epsilon_expansion(BesselQuery(300, 286)).value, oracle(300, 286));
    const double e316 = rel(epsilon_expansion(BesselQuery(300, 316)).value, oracle(300, 316));
    return {ok, "max rel err on [288, 314] " + fmt("%.1e", worst) + " (limit 1e-4)" +
                    (bad.empty() ? "" : "; over limit at" + bad) + "; x=286: " + fmt("%.1e", e286) +
                    ", x=316: " + fmt("%.1e", e316)};
}

Outcome ac6() {
    int violations = 0, checked = 0;
    double worst_ratio = 0;
    for (double nu : {100.0, 300.0, 1000.0}) {
        const double u = std::cbrt(nu);
        for (double d : {-5.0, -4.0, -3.0, -2.0, -0.5, 0.5, 2.0, 3.0, 4.0, 5.0}) {
            const double x = nu + d * u;
            const double exact = oracle(nu, x);
            const BesselQuery q(nu, x);
            const double v = d < 0 ? watson_below(q).value : watson_above(q).value;
            const double bound = d < 0 ? 3.0 / nu : 24.0 / nu;
            const double err = std::fabs(v - exact);
            worst_ratio = std::max(worst_ratio, err / bound);
            if (err > bound) ++violations;
            ++checked;
        }
    }
    return {violations == 0, std::to_string(checked) + " points, " + std::to_string(violations) +
                                 " violations, worst error/bound " + fmt("%.2e", worst_ratio)};
}

Outcome ac7() {
    const double nu = 1e6;
    double worst = 0, at = 0;
    double last_ok = 0;
    bool contiguous = true;
    for (double x = 1000020; x <= 1000180; x += 1) {
        const BesselQuery q(nu, x);
        const double e = rel(epsilon_expansion(q).value, watson_above(q).value);
        if (e > worst) worst = e, at = x;
        if (e < 1e-4 && contiguous) last_ok = x;
        else contiguous = false;
    }
    // triple overlap: all of Meissel Second, epsilon and Watson within 1e-4 pairwise
    int triple = 0;
    double best = INFINITY, best_at = 0;
    for (double x = 1000001; x <= 1000240; x += 1) {
        const BesselQuery q(nu, x);
        const double m = meissel_second(q).value, e = epsilon_expansion(q).value, w = watson_above(q).value;
        const double spread = std::max({rel(m, w), rel(e, w), rel(m, e)});
        if (spread < best) best = spread, best_at = x;
        if (spread < 1e-4) ++triple;
    }
    const bool ok = worst < 1e-4 && triple > 0;
    return {ok, "epsilon vs Watson max rel diff " + fmt("%.2e", worst) + " at x=" + fmt("%.0f", at) +
                    " (limit 1e-4, holds through x=" + fmt("%.0f", last_ok) + "); triple-overlap points " +
                    std::to_string(triple) + ", tightest spread " + fmt("%.1e", best) + " at x=" +
                    fmt("%.0f", best_at)};
}

Outcome ac8() {
    const double nu = 1e6, a = 1000200, b = 32500000;
    const int n = 324;
    int bad = 0, over = 0;
    std::vector<double> times;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (b - a) * i / (n - 1);
        const auto t0 = Clock::now();
        const auto r = meissel_second(BesselQuery(nu, x));
        times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
        if (!std::isfinite(r.value)) ++bad;
        const double beta = std::acos(nu / x);
        const double env = std::sqrt(2.0 / (std::tan(beta) * nu * M_PI));
        worst = std::max(worst, std::fabs(r.value) / env);
        if (std::fabs(r.value) > env) ++over;
    }
    std::nth_element(times.begin(), times.begin() + n / 2, times.end());
    const double med = times[n / 2];
    return {bad == 0 && over == 0 && med < 10, std::to_string(n) + " points, non-finite " + std::to_string(bad) +
                                                   ", above envelope " + std::to_string(over) + " (max |J|/env " +
                                                   fmt("%.6f", worst) + "), median " + fmt("%.3f ms", med)};
}

Outcome ac9() {
    const BesselQuery q(300, 150);
    for (int i = 0; i < 5; ++i) {
        eval_J(q);
        exact_J(300, 150, 20);
    }
    volatile double sink = 0;
    const double fast = median_us(201, [&] { sink = sink + eval_J(q).value; });
    const double slow = median_us(51, [&] { sink = sink + exact_J(300, 150, 20).to_double(); });
    const double ratio = slow / fast;
    return {ratio >= 3, "asymptotic " + fmt("%.1f us", fast) + ", 20-digit oracle " + fmt("%.1f us", slow) +
                            ", ratio " + fmt("%.1f", ratio) + " (needs >= 3)"};
}

GwParams load(const std::string& name) {
    std::ifstream in(std::string(BASYM_PRESET_DIR) + "/" + name);
    if (!in) throw Error(ErrorKind::MalformedFile, "missing preset " + name);
    return read_gw_params(in);
}

Outcome ac10() {
    std::string d;
    bool ok = true;
    const GwParams desk = load("desk.params");
    const cplx base = ft_signal(desk).total;
    GwParams q = desk;
    q.l_max += 4;
    const double dl = std::abs(ft_signal(q).total - base) / std::abs(base);
    q = desk;
    q.n_min *= 2;
    q.n_max *= 2;
    const double dn = std::abs(ft_signal(q).total - base) / std::abs(base);
    ok = ok && dl < 1e-6 && dn < 1e-6;
    d += "desk L+4 change " + fmt("%.1e", dl) + ", n doubling change " + fmt("%.1e", dn);

    // psi2 limit where l - B_orb is an even integer (n = 0, l - m even)
    bool psi2_ok = true;
    for (int l = 0; l <= desk.l_max; ++l)
        for (int m = -l; m <= l; m += 2) {
            const cplx v = psi2(desk, l, 0, m) * std::pow(4.0, l) / detail::cis_pi(-b_orb(desk, 0, m) / 2.0);
            psi2_ok = psi2_ok && v == cplx(desk.R, 0.0);
        }
    ok = ok && psi2_ok;
    d += std::string("; psi2 limit ") + (psi2_ok ? "exact" : "WRONG");

    const bool f_ok = hypergeom_1F3(1.0, 1.5, 2.0, 3.0, 0.0) == 1.0 && hypergeom_1F3(21, 21.5, -3.5, 7.25, 0.0) == 1.0;
    ok = ok && f_ok;
    d += std::string("; 1F3(0) ") + (f_ok ? "= 1" : "WRONG");

    // orthonormality, Gauss-Legendre in cos(theta) times uniform phi
    const int nq = 32, nphi = 32;
    std::vector<double> node(nq), weight(nq);
    for (int i = 0; i < nq; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (nq + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= nq; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = nq * (x * p1 - p0) / (x * x - 1);
            x -= p1 / dp;
            node[i] = x;
            weight[i] = 2 / ((1 - x * x) * dp * dp);
        }
    }
    double orth = 0;
    const int lmax = 8;
    for (int l1 = 0; l1 <= lmax; ++l1)
        for (int m1 = -l1; m1 <= l1; ++m1)
            for (int l2 = 0; l2 <= lmax; ++l2)
                for (int m2 = -l2; m2 <= l2; ++m2) {
                    cplx s = 0;
                    for (int i = 0; i < nq; ++i) {
                        const double th = std::acos(node[i]);
                        for (int j = 0; j < nphi; ++j) {
                            const double ph = 2 * M_PI * j / nphi;
                            s += weight[i] * (2 * M_PI / nphi) * spherical_harmonic(l1, m1, th, ph) *
                                 std::conj(spherical_harmonic(l2, m2, th, ph));
                        }
                    }
                    orth = std::max(orth, std::abs(s - (l1 == l2 && m1 == m2 ? 1.0 : 0.0)));
                }
    ok = ok && orth < 1e-8;
    d += "; Y_lm orthonormality " + fmt("%.1e", orth);

    GwParams t0 = load("theta0.params");
    FtOptions keep;
    keep.keep_terms = true;
    const FtResult full = ft_signal(t0, keep);
    bool zero = true;
    for (const auto& t : full.terms)
        if (t.n != 0) zero = zero && t.product == cplx(0.0, 0.0);
    t0.n_min = t0.n_max = 0;
    const bool collapse = zero && ft_signal(t0).total == full.total;
    ok = ok && collapse;
    d += std::string("; theta=0 collapse ") + (collapse ? "exact" : "WRONG");

    const auto t1 = Clock::now();
    const FtResult phys = ft_signal(load("physical.params"));
    bool asymptotic = std::isfinite(std::abs(phys.total));
    for (const auto& [m, c] : phys.bessel_methods)
        asymptotic = asymptotic && m != Method::Oracle && m != Method::SmallArgSeries;
    ok = ok && asymptotic;
    d += std::string("; physical f0 run ") + (asymptotic ? "asymptotic-only" : "NOT asymptotic-only") + " in " +
         fmt("%.1f s", seconds_since(t1));
    return {ok, d};
}

Outcome ac11() {
    double worst = 0, at = 0;
    int switches = 0;
    Method prev = Method::Oracle;
    bool first = true;
    for (int i = 0; i <= 400; ++i) {
        const double x = 250 + 0.25 * i;
        const auto r = eval_J(BesselQuery(300, x));
        const double e = std::fabs(r.value - oracle(300, x));
        if (e > worst) worst = e, at = x;
        if (!first && r.method != prev) ++switches;
        prev = r.method;
        first = false;
    }
    return {worst < 1e-4, "401 points, " + std::to_string(switches) + " method switches, max abs deviation " +
                              fmt("%.1e", worst) + " at x=" + fmt("%g", at) + " (limit 1e-4)"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},
    {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11},
};

}  // namespace

int main(int argc, char** argv) {
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        if (argc > 1 && std::strcmp(argv[1], name.c_str()) != 0) continue;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%-4s %s  %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed ? 1 : 0;
}
