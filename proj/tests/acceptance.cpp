// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hetamp/amplifiers.hpp"
#include "hetamp/heterodyne.hpp"
#include "hetamp/states.hpp"
#include "hetamp/verification.hpp"

using namespace hetamp;
using std::abs;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const char* title, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, title,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

Eigen::VectorXd linspace(double a, double b, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = a + (b - a) * i / (n - 1);
    return v;
}

double poisson_pmf(double mean, int n) {
    return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

// --- 1: amplified intensity density collapses onto the integer comb ---------
void criterion1() {
    const double nbar = 12.0;
    auto rho = TestState::coherent_nbar(nbar).density(64);
    const auto h = linspace(0.0, 30.0, 6001);
    const double dh = h(1) - h(0);

    std::ostringstream why;
    bool ok = true;

    auto p1000 = preamp_number_density(rho, 1000, Efficiency(1.0), h).base;
    for (int n = 6; n <= 18 && ok; ++n) {
        // peak location within one grid step of the integer
        int lo = int((n - 0.5) / dh), hi = int((n + 0.5) / dh);
        int arg = lo;
        for (int i = lo; i <= hi; ++i)
            if (p1000.density(i) > p1000.density(arg)) arg = i;
        if (abs(h(arg) - n) > dh + 1e-12) {
            ok = false;
            why << "peak near n=" << n << " at h=" << h(arg);
        }
        // integer-neighborhood mass matches the Poisson weight within 2%
        double mass = 0;
        for (int i = lo; i <= hi; ++i) mass += p1000.density(i) * p1000.weights(i);
        double target = poisson_pmf(nbar, n);
        if (abs(mass - target) > 0.02 * target) {
            ok = false;
            why << "mass at n=" << n << " is " << mass << " vs " << target;
        }
    }

    // no amplification: a single smooth bump, no comb
    auto p1 = preamp_number_density(rho, 1, Efficiency(1.0), h).base;
    int maxima = 0;
    const double floor_v = p1.density.maxCoeff() * 1e-6;
    for (int i = 1; i + 1 < p1.density.size(); ++i)
        if (p1.density(i) > floor_v && p1.density(i) > p1.density(i - 1) &&
            p1.density(i) >= p1.density(i + 1))
            ++maxima;
    if (maxima != 1) {
        ok = false;
        why << "unamplified density has " << maxima << " local maxima";
    }

    report(1, "amplified intensity comb", ok, why.str());
}

// --- 2: heterodyne marginals carry the anti-normal excess noise -------------
void criterion2() {
    std::ostringstream why;
    bool ok = true;

    auto vac = TestState::vacuum().density(8);
    auto x = linspace(-10.0, 10.0, 4001);
    double var = quadrature_marginal_density(vac, 0.0, Efficiency(1.0), x).variance();
    if (abs(var - 0.5) > 1e-8) {
        ok = false;
        why << "analytic quadrature variance " << var;
    }

    const std::size_t n = 1000000;
    auto s = heterodyne_sample(vac, n, Efficiency(1.0), 12345);
    double m = 0, m2 = 0;
    for (cd a : s.values) {
        m += a.real();
        m2 += a.real() * a.real();
    }
    m /= n;
    m2 = m2 / n - m * m;
    const double se = 0.5 * std::sqrt(2.0 / (n - 1.0));
    if (abs(m2 - 0.5) > 3 * se) {
        ok = false;
        why << "sampled quadrature variance " << m2 << " (3se=" << 3 * se << ")";
    }

    auto coh = TestState::coherent_nbar(4.0).density(64);
    double i1 = heterodyne_moment(PhaseSpacePolynomial::abs2(), 1, coh, Efficiency(1.0));
    double i05 = heterodyne_moment(PhaseSpacePolynomial::abs2(), 1, coh, Efficiency(0.5));
    if (abs(i1 - 5.0) > 1e-9 || abs(i05 - 6.0) > 1e-9) {
        ok = false;
        why << "intensity means " << i1 << ", " << i05;
    }

    report(2, "heterodyne excess noise", ok, why.str());
}

// --- 3: amplified-moment errors fall at the analytic rates ------------------
void criterion3() {
    std::ostringstream why;
    bool ok = true;

    {
        auto rep = moment_condition_report(
            AmplifierSpec::Kind::Number, {2, 4, 8, 16}, PhaseSpacePolynomial::abs2(),
            {TestState::coherent_nbar(4.0)}, Efficiency(1.0));
        if (rep.verdict != "converges") {
            ok = false;
            why << "number verdict " << rep.verdict;
        }
        for (const auto& row : rep.rows)
            if (row.l == 1 && abs(row.error - 1.0 / row.g) > 1e-10) {
                ok = false;
                why << "number l=1 error " << row.error << " at g=" << row.g;
            }
        for (const auto& fit : rep.fits)
            if (fit.l == 1 && fit.exponent < 0.8) {
                ok = false;
                why << "number exponent " << fit.exponent;
            }
    }
    {
        const double eta = 0.8;
        auto rep = moment_condition_report(
            AmplifierSpec::Kind::Quadrature, {2, 4, 8},
            PhaseSpacePolynomial::re_alpha(0.0),
            {TestState::vacuum(), TestState::coherent(2.0)}, Efficiency(eta));
        if (rep.verdict != "converges") {
            ok = false;
            why << "quadrature verdict " << rep.verdict;
        }
        for (const auto& row : rep.rows)
            if (row.l == 2 &&
                abs(row.error - (2.0 - eta) / (4.0 * eta * row.g * row.g)) > 1e-9) {
                ok = false;
                why << "quadrature l=2 error " << row.error << " at g=" << row.g;
            }
        for (const auto& fit : rep.fits)
            if (fit.l == 2 && fit.exponent < 1.6) {
                ok = false;
                why << "quadrature exponent " << fit.exponent;
            }
    }

    report(3, "moment-condition convergence rates", ok, why.str());
}

// --- 4: the multiplicative observable defeats the moment condition ---------
void criterion4() {
    std::ostringstream why;
    bool ok = true;

    std::vector<TestState> states = {
        TestState::coherent(std::polar(1.0, M_PI / 4)),
        TestState::coherent(std::polar(2.0, M_PI / 4)),
    };
    auto rep = k_counterexample_report(0.0, states, {2, 4, 8});
    if (rep.verdict != "diverges-from-target") {
        ok = false;
        why << "verdict " << rep.verdict;
    }
    int within = 0;
    for (const auto& st : rep.states) {
        for (const auto& gr : st.gains) {
            if (abs(gr.grid_l0 - 1.0) > 1e-6) {
                ok = false;
                why << st.state << " l0=" << gr.grid_l0;
            }
            if (abs(gr.grid_l1 - st.k_mean) > 1e-6 * std::max(1.0, abs(st.k_mean))) {
                ok = false;
                why << st.state << " l1 err "
                    << abs(gr.grid_l1 - st.k_mean) / std::max(1.0, abs(st.k_mean));
            }
        }
        if (abs(st.gains.back().grid_ratio - 1.25) <= 0.03 * 1.25) ++within;
        if (abs(st.asym_ratio - 1.25) > 1e-9) {
            ok = false;
            why << st.state << " asym ratio " << st.asym_ratio;
        }
    }
    if (within < 2) {
        ok = false;
        why << " only " << within << " states within 3% of 5/4";
    }

    report(4, "stuck second moment of the multiplicative observable", ok, why.str());
}

// --- 5: multiplicative amplifier numerical integrity ------------------------
void criterion5() {
    std::ostringstream why;
    bool ok = true;

    auto spec = make_grid();
    auto psi = TestState::coherent(std::polar(1.0, M_PI / 4)).grid(spec);
    const double k_in = grid_expectation_k(psi);

    for (double g : {2.0, 4.0, 8.0}) {
        double drift = 0;
        auto out = k_amplifier_apply(psi, g, &drift);
        if (drift > 1e-6) {
            ok = false;
            why << "drift " << drift << " at g=" << g;
        }
        double rel = abs(grid_expectation_k(out) - g * k_in) / abs(g * k_in);
        if (rel > 1e-6) {
            ok = false;
            why << "scaling err " << rel << " at g=" << g;
        }
    }

    auto once = k_amplifier_apply(psi, 4.0);
    auto twice = k_amplifier_apply(k_amplifier_apply(psi, 2.0), 2.0);
    double comp = (once.values - twice.values).cwiseAbs().maxCoeff() /
                  once.values.cwiseAbs().maxCoeff();
    if (comp > 1e-6) {
        ok = false;
        why << "composition gap " << comp;
    }

    // stability of the rescaled second moment under the center-exclusion cutoff,
    // holding the log-domain step fixed while the cutoff moves
    std::vector<double> l2s;
    const double dt = (std::log(32.0) - std::log(1e-8)) / 4000.0;
    for (double floor_eps : {1e-10, 1e-8, 1e-6}) {
        const int pts = int(std::lround((std::log(32.0) - std::log(floor_eps)) / dt));
        auto sp = make_grid(32.0, pts, floor_eps);
        auto ps = TestState::coherent(std::polar(std::sqrt(2.0), M_PI / 4)).grid(sp);
        l2s.push_back(preamp_moment(AmplifierSpec::k(8.0),
                                    PhaseSpacePolynomial::k_family(0.0), 2, ps,
                                    Efficiency(1.0)));
    }
    double spread = *std::max_element(l2s.begin(), l2s.end()) -
                    *std::min_element(l2s.begin(), l2s.end());
    if (spread > 1e-6) {
        ok = false;
        why << "cutoff sensitivity " << spread;
    }

    report(5, "multiplicative amplifier integrity", ok, why.str());
}

// --- 6: closed-form disentangling coefficients ------------------------------
void criterion6() {
    std::ostringstream why;
    bool ok = true;

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        BchInput in{cd(u(rng), u(rng)), cd(u(rng), u(rng)), cd(u(rng), u(rng))};
        worst = std::max(worst, bch_matrix_check(in, bch_coefficients(in)));
    }
    if (worst > 1e-10) {
        ok = false;
        why << "max residual " << worst;
    }

    // large-gain ladder: remainder after the leading order falls ~ g^{-3}
    const double lambda = 1.0;
    std::vector<double> gs = {100.0, 1000.0, 10000.0}, rem;
    for (double g : gs) {
        BchInput in{cd(-lambda / g, 0), cd(lambda / g, 0), 0.0};
        auto out = bch_coefficients(in);
        rem.push_back(abs(out.B_plus - in.A_plus) + abs(out.B_minus - in.A_minus));
    }
    double p = std::log(rem.front() / rem.back()) / std::log(gs.back() / gs.front());
    if (!(p >= 2.7)) {
        ok = false;
        why << "remainder exponent " << p;
    }

    // with the logarithmic third component the leading order still matches
    {
        const double g = 1000.0, c = 1.0;
        BchInput in{cd(-lambda / g, 0), cd(lambda / g, 0),
                    -std::log(cd(1.0, -lambda * c / (2.0 * g)))};
        auto out = bch_coefficients(in);
        if (abs(out.B_plus - in.A_plus) > 0.01 * lambda / g ||
            bch_matrix_check(in, out) > 1e-12) {
            ok = false;
            why << "leading-order gap " << abs(out.B_plus - in.A_plus);
        }
    }

    report(6, "disentangling identities", ok, why.str());
}

// --- 7: Stirling table and density bracket ----------------------------------
void criterion7() {
    std::ostringstream why;
    bool ok = true;

    auto t = stirling_first_kind(8);
    for (int N = 0; N <= 20 && ok; ++N)
        for (int l = 0; l <= 8; ++l) {
            long long x = N + l, lhs = 0, xp = 1;
            for (int k = 0; k <= l; ++k) {
                lhs += t.value(l, k) * xp;
                xp *= x;
            }
            long long rhs = 1;
            for (int j = N + 1; j <= N + l; ++j) rhs *= j;
            if (lhs != rhs) {
                ok = false;
                why << "identity fails at N=" << N << " l=" << l;
            }
        }

    int violations = 0;
    for (int g : {10, 100, 1000})
        for (int n = 1; n <= 20; ++n)
            for (int i = 1; i <= 200; ++i) {
                double h = 2.0 * n * i / 200.0;
                auto [lo, hi] = stirling_density_bounds(n, g, h);
                double p = preamp_number_weight(n, g, h);
                if (p > hi * (1 + 1e-8) + 1e-300 || p < lo * (1 - 1e-8) - 1e-300)
                    ++violations;
            }
    if (violations != 0) {
        ok = false;
        why << violations << " bracket violations";
    }

    report(7, "factorial bounds on the amplified weights", ok, why.str());
}

// --- 8: command-line determinism --------------------------------------------
int run_cli(const std::string& args) {
    const std::string cmd = std::string(HETAMP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion8() {
    std::ostringstream why;
    bool ok = true;

    auto dir = fs::temp_directory_path() / "hetamp_acceptance";
    fs::create_directories(dir);

    const std::vector<std::pair<std::string, std::string>> jobs = {
        {"sample --state coherent-nbar:12 --samples 1000 --seed 41", "sample"},
        {"fig1 --gains 1,100 --points 601 --hmax 8", "fig1"},
        {"counterexample --gains 2,4", "cx"},
    };
    for (const auto& [args, tag] : jobs) {
        auto f1 = dir / (tag + "_a"), f2 = dir / (tag + "_b");
        if (run_cli(args + " --out " + f1.string()) != 0 ||
            run_cli(args + " --out " + f2.string()) != 0) {
            ok = false;
            why << tag << " run failed";
            continue;
        }
        auto a = slurp(f1);
        if (a.empty() || a != slurp(f2)) {
            ok = false;
            why << tag << " artifacts differ across identical runs";
        }
    }

    auto fs1 = dir / "seed_a", fs2 = dir / "seed_b";
    run_cli("sample --state vacuum --samples 100 --seed 1 --out " + fs1.string());
    run_cli("sample --state vacuum --samples 100 --seed 2 --out " + fs2.string());
    if (slurp(fs1) == slurp(fs2)) {
        ok = false;
        why << "different seeds give identical samples";
    }

    report(8, "deterministic command-line artifacts", ok, why.str());
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
