// Command-line front end: every experiment artifact (CSV/JSON) in one binary.
#include <CLI11.hpp>

#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "hetamp/amplifiers.hpp"
#include "hetamp/errors.hpp"
#include "hetamp/fock.hpp"
#include "hetamp/grid.hpp"
#include "hetamp/heterodyne.hpp"
#include "hetamp/io.hpp"
#include "hetamp/states.hpp"
#include "hetamp/verification.hpp"

using namespace hetamp;
using json = nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResolution = 3;
constexpr int kExitVerdict = 4;

struct Common {
    int dim = 64;
    double eta = 1.0;
    std::string out;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--dim", c.dim, "Fock truncation dimension");
    cmd->add_option("--eta", c.eta, "detector quantum efficiency in (0,1]");
    cmd->add_option("--out", c.out, "output path (default: stdout)");
    cmd->add_option("--seed", c.seed, "RNG seed");
}

void emit(const Common& c, const std::string& content) {
    if (c.out.empty())
        std::cout << content;
    else
        write_atomic(c.out, content);
}

std::vector<double> parse_gains(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw ConfigError("empty gain list");
    return out;
}

std::vector<TestState> parse_states(const std::string& csv) {
    std::vector<TestState> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ';')) out.push_back(TestState::parse(tok));
    if (out.empty()) throw ConfigError("empty state list");
    return out;
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = lo + (hi - lo) * i / (n - 1);
    return v;
}

int run(int argc, char** argv) {
    CLI::App app{"preamplified-heterodyne measurement numerics"};
    app.require_subcommand(1);

    // ---- fig1: comb emergence dataset --------------------------------------
    auto* fig1 = app.add_subcommand("fig1", "number-density comb dataset for a gain ladder");
    Common c1;
    add_common(fig1, c1);
    double f1_nbar = 12.0, f1_hmax = 30.0;
    std::string f1_gains = "1,100,1000";
    int f1_points = 6001;
    fig1->add_option("--nbar", f1_nbar, "coherent-state mean photon number");
    fig1->add_option("--gains", f1_gains, "comma-separated integer gains");
    fig1->add_option("--hmax", f1_hmax, "upper edge of the h grid");
    fig1->add_option("--points", f1_points, "h-grid resolution");

    // ---- density ----------------------------------------------------------
    auto* den = app.add_subcommand("density", "heterodyne marginal density for f");
    Common c2;
    add_common(den, c2);
    std::string d_state = "vacuum", d_f = "abs2", d_method = "monte-carlo";
    double d_phi = 0, d_c = 0, d_umax = 30.0;
    int d_bins = 200, d_points = 2001;
    std::size_t d_samples = 200000;
    den->add_option("--state", d_state, "vacuum|fock:N|coherent:RE[,IM]|coherent-nbar:N|squeezed:R");
    den->add_option("--f", d_f, "abs2 | re_alpha | im_alpha2 | k_family");
    den->add_option("--phi", d_phi, "quadrature angle for re_alpha");
    den->add_option("--c", d_c, "k_family parameter");
    den->add_option("--bins", d_bins, "histogram bins for generic f");
    den->add_option("--samples", d_samples, "Monte Carlo samples");
    den->add_option("--method", d_method, "monte-carlo | quadrature2d (generic f)");
    den->add_option("--umax", d_umax, "grid edge for analytic routes");
    den->add_option("--points", d_points, "grid points for analytic routes");

    // ---- sample -----------------------------------------------------------
    auto* smp = app.add_subcommand("sample", "raw heterodyne outcomes");
    Common c3;
    add_common(smp, c3);
    std::string s_state = "vacuum";
    std::size_t s_n = 1000;
    smp->add_option("--state", s_state, "state descriptor");
    smp->add_option("--n,--samples", s_n, "number of samples");

    // ---- preamp -----------------------------------------------------------
    auto* pre = app.add_subcommand("preamp", "preamplified rescaled outcome density");
    Common c4;
    add_common(pre, c4);
    std::string p_obs = "number", p_state = "coherent-nbar:12";
    double p_gain = 100, p_phi = 0, p_umax = 30.0;
    int p_points = 6001;
    std::size_t p_samples = 200000;
    pre->add_option("--observable", p_obs, "number | quadrature");
    pre->add_option("--state", p_state, "state descriptor");
    pre->add_option("--gain", p_gain, "amplifier gain");
    pre->add_option("--phi", p_phi, "quadrature angle");
    pre->add_option("--umax", p_umax, "grid edge");
    pre->add_option("--points", p_points, "grid points");
    pre->add_option("--samples", p_samples, "Monte Carlo samples (eta < 1 number route)");

    // ---- moments ----------------------------------------------------------
    auto* mom = app.add_subcommand("moments", "gain-ladder moment-convergence report");
    Common c5;
    add_common(mom, c5);
    std::string m_obs = "number", m_gains = "2,4,8,16", m_states;
    double m_phi = 0, m_c = 0;
    int m_lmax = 2, m_grid_points = 4000;
    double m_grid_max = 32.0;
    bool m_assert_conv = false, m_assert_div = false;
    mom->add_option("--observable", m_obs, "number | quadrature | k");
    mom->add_option("--gains", m_gains, "ascending comma-separated gains");
    mom->add_option("--states", m_states, "semicolon-separated state descriptors");
    mom->add_option("--phi", m_phi, "quadrature angle");
    mom->add_option("--c", m_c, "k-family parameter");
    mom->add_option("--lmax", m_lmax, "highest moment order");
    mom->add_option("--grid-points", m_grid_points, "grid points per side (k observable)");
    mom->add_option("--grid-max", m_grid_max, "grid half-width (k observable)");
    mom->add_flag("--assert-converges", m_assert_conv, "exit 4 unless verdict is converges");
    mom->add_flag("--assert-diverges", m_assert_div,
                  "exit 4 unless verdict is diverges-from-target");

    // ---- counterexample ---------------------------------------------------
    auto* ctr = app.add_subcommand("counterexample", "K-observable infinite-gain failure report");
    Common c6;
    add_common(ctr, c6);
    double x_c = 0;
    std::string x_gains = "2,4,8";
    std::string x_states = "coherent:0.70710678118654752,0.70710678118654752;"
                           "coherent:1.4142135623730951,1.4142135623730951";
    int x_grid_points = 4000;
    double x_grid_max = 32.0;
    bool x_assert_div = false;
    ctr->add_option("--c", x_c, "k-family parameter");
    ctr->add_option("--gains", x_gains, "comma-separated gains");
    ctr->add_option("--states", x_states, "semicolon-separated state descriptors");
    ctr->add_option("--grid-points", x_grid_points, "grid points per side");
    ctr->add_option("--grid-max", x_grid_max, "grid half-width");
    ctr->add_flag("--assert-diverges", x_assert_div,
                  "exit 4 unless verdict is diverges-from-target");

    // ---- bch --------------------------------------------------------------
    auto* bch = app.add_subcommand("bch", "su(1,1) disentangling residual summary");
    Common c7;
    add_common(bch, c7);
    int b_trials = 1000;
    double b_radius = 0.5, b_assert_residual = 0;
    bch->add_option("--trials", b_trials, "number of random inputs");
    bch->add_option("--radius", b_radius, "max |A| of random inputs");
    bch->add_option("--assert-residual", b_assert_residual,
                    "exit 4 when the max residual exceeds this bound");

    // ---- stirling ---------------------------------------------------------
    auto* sti = app.add_subcommand("stirling", "signed Stirling numbers of the first kind");
    Common c8;
    add_common(sti, c8);
    int st_lmax = 12;
    sti->add_option("--lmax", st_lmax, "largest row (<= 30)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (fig1->parsed()) {
        const DensityOperator rho = TestState::coherent_nbar(f1_nbar).density(c1.dim);
        const Eigen::VectorXd h = linspace(0.0, f1_hmax, f1_points);
        std::vector<std::string> names{"h"};
        std::vector<Eigen::VectorXd> cols{h};
        for (double g : parse_gains(f1_gains)) {
            const int gi = static_cast<int>(std::lround(g));
            if (std::abs(g - gi) > 1e-12) throw ConfigError("fig1: gains must be integers");
            auto d = preamp_number_density(rho, gi, Efficiency(c1.eta), h);
            names.push_back("p_g" + std::to_string(gi));
            cols.push_back(d.base.density);
        }
        emit(c1, columns_to_csv(names, cols,
                                {{"nbar", format_double(f1_nbar)},
                                 {"eta", format_double(c1.eta)}}));
        return 0;
    }

    if (den->parsed()) {
        const DensityOperator rho = TestState::parse(d_state).density(c2.dim);
        const Efficiency eta(c2.eta);
        OutcomeDensity d;
        if (d_f == "abs2") {
            d = number_marginal_density(rho, eta, linspace(0.0, d_umax, d_points), d_samples,
                                        c2.seed);
        } else if (d_f == "re_alpha") {
            d = quadrature_marginal_density(rho, d_phi, eta,
                                            linspace(-d_umax, d_umax, d_points));
        } else if (d_f == "im_alpha2" || d_f == "k_family") {
            const auto f = d_f == "im_alpha2" ? PhaseSpacePolynomial::im_alpha2()
                                              : PhaseSpacePolynomial::k_family(d_c);
            const auto method = d_method == "quadrature2d" ? MarginalMethod::Quadrature2d
                                                           : MarginalMethod::MonteCarlo;
            d = generic_marginal_density(rho, f, eta, d_bins, method, d_samples, c2.seed);
        } else {
            throw ConfigError("density: unknown --f '" + d_f +
                              "' (abs2 | re_alpha | im_alpha2 | k_family)");
        }
        emit(c2, density_to_csv(d, {{"state", d_state}, {"f", d_f},
                                    {"eta", format_double(c2.eta)}}));
        return 0;
    }

    if (smp->parsed()) {
        const DensityOperator rho = TestState::parse(s_state).density(c3.dim);
        emit(c3, sample_to_csv(heterodyne_sample(rho, s_n, Efficiency(c3.eta), c3.seed)));
        return 0;
    }

    if (pre->parsed()) {
        const DensityOperator rho = TestState::parse(p_state).density(c4.dim);
        const Efficiency eta(c4.eta);
        PreampDensity d;
        if (p_obs == "number") {
            const int gi = static_cast<int>(std::lround(p_gain));
            if (std::abs(p_gain - gi) > 1e-12)
                throw ConfigError("preamp: the number amplifier takes integer gain");
            d = preamp_number_density(rho, gi, eta, linspace(0.0, p_umax, p_points),
                                      p_samples, c4.seed);
        } else if (p_obs == "quadrature") {
            d = preamp_quadrature_density(rho, p_phi, p_gain, eta,
                                          linspace(-p_umax, p_umax, p_points));
        } else {
            throw ConfigError("preamp: --observable must be number or quadrature "
                              "(the K observable is covered by `counterexample`)");
        }
        emit(c4, density_to_csv(d.base, {{"observable", d.observable},
                                         {"gain", format_double(d.gain)},
                                         {"eta", format_double(d.eta)},
                                         {"state", p_state}}));
        return 0;
    }

    if (mom->parsed()) {
        AmplifierSpec::Kind kind;
        PhaseSpacePolynomial f;
        std::string def_states;
        if (m_obs == "number") {
            kind = AmplifierSpec::Kind::Number;
            f = PhaseSpacePolynomial::abs2();
            def_states = "coherent-nbar:4;fock:3";
        } else if (m_obs == "quadrature") {
            kind = AmplifierSpec::Kind::Quadrature;
            f = PhaseSpacePolynomial::re_alpha(m_phi);
            def_states = "vacuum;coherent:2";
        } else if (m_obs == "k") {
            kind = AmplifierSpec::Kind::K;
            f = PhaseSpacePolynomial::k_family(m_c);
            def_states = "coherent:0.70710678118654752,0.70710678118654752;"
                         "coherent:1.4142135623730951,1.4142135623730951";
        } else {
            throw ConfigError("moments: --observable must be number, quadrature or k");
        }
        MomentReportConfig cfg;
        cfg.dim = c5.dim;
        cfg.l_max = m_lmax;
        if (kind == AmplifierSpec::Kind::K)
            cfg.grid = make_grid(m_grid_max, m_grid_points);
        auto rep = moment_condition_report(
            kind, parse_gains(m_gains), f,
            parse_states(m_states.empty() ? def_states : m_states), Efficiency(c5.eta), cfg);
        emit(c5, rep.to_json() + "\n");
        if (m_assert_conv && rep.verdict != "converges") return kExitVerdict;
        if (m_assert_div && rep.verdict != "diverges-from-target") return kExitVerdict;
        return 0;
    }

    if (ctr->parsed()) {
        CounterexampleConfig cfg;
        cfg.dim = c6.dim;
        cfg.grid = make_grid(x_grid_max, x_grid_points);
        auto rep = k_counterexample_report(x_c, parse_states(x_states), parse_gains(x_gains),
                                           cfg);
        emit(c6, rep.to_json() + "\n");
        if (x_assert_div && rep.verdict != "diverges-from-target") return kExitVerdict;
        return 0;
    }

    if (bch->parsed()) {
        if (b_trials < 1) throw ConfigError("bch: --trials must be >= 1");
        std::mt19937_64 rng(c7.seed);
        std::uniform_real_distribution<double> u(-b_radius, b_radius);
        double max_residual = 0, max_gamma_gap = 0;
        for (int t = 0; t < b_trials; ++t) {
            BchInput in{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
            const BchOutput out = bch_coefficients(in);
            max_residual = std::max(max_residual, bch_matrix_check(in, out));
            const cd gap = out.Gamma * out.Gamma -
                           (out.B_3 * out.B_3 - out.B_plus * out.B_minus);
            max_gamma_gap = std::max(max_gamma_gap, std::abs(gap));
        }
        json j{{"trials", b_trials},
               {"radius", b_radius},
               {"seed", c7.seed},
               {"max_residual", max_residual},
               {"max_gamma_identity_gap", max_gamma_gap}};
        emit(c7, j.dump(2) + "\n");
        if (b_assert_residual > 0 && max_residual > b_assert_residual) return kExitVerdict;
        return 0;
    }

    if (sti->parsed()) {
        const StirlingTable t = stirling_first_kind(st_lmax);
        std::ostringstream os;
        os << "l,k,s\n";
        for (int l = 0; l <= t.l_max; ++l)
            for (int k = 0; k <= l; ++k) os << l << "," << k << "," << t.value(l, k) << "\n";
        emit(c8, os.str());
        return 0;
    }

    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TruncationError& e) {
        std::cerr << "resolution failure: " << e.what() << "\n";
        return kExitResolution;
    } catch (const ResolutionError& e) {
        std::cerr << "resolution failure: " << e.what() << "\n";
        return kExitResolution;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
