#include "hetamp/verification.hpp"

#include <cmath>
#include <complex>

#include <nlohmann/json.hpp>

#include "hetamp/errors.hpp"

namespace hetamp {

using json = nlohmann::json;

long long StirlingTable::value(int l, int k) const {
    if (l < 0 || l > l_max || k < 0 || k > l) throw ConfigError("stirling: index out of range");
    return rows[l][k];
}

StirlingTable stirling_first_kind(int l_max) {
    if (l_max < 0) throw ConfigError("stirling_first_kind: l_max must be nonnegative");
    if (l_max > 30)
        throw ConfigError("stirling_first_kind: l_max > 30 would overflow 64-bit integers");
    StirlingTable t;
    t.l_max = l_max;
    t.rows.resize(l_max + 1);
    t.rows[0] = {1};
    for (int l = 0; l < l_max; ++l) {
        t.rows[l + 1].assign(l + 2, 0);
        for (int k = 0; k <= l + 1; ++k) {
            long long v = 0;
            if (k >= 1) v += t.rows[l][k - 1];
            if (k <= l) v -= (long long)l * t.rows[l][k];
            t.rows[l + 1][k] = v;
        }
    }
    return t;
}

std::pair<double, double> stirling_density_bounds(int n, int g, double h) {
    if (n < 1) throw ConfigError("stirling_density_bounds: n must be >= 1");
    if (!(h > 0)) throw ConfigError("stirling_density_bounds: h must be positive");
    if (g < 1) throw ConfigError("stirling_density_bounds: g must be >= 1");
    const double gn = double(g) * n;
    const double upper =
        std::exp(gn * (1.0 - h / n + std::log(h / n))) * std::sqrt(g / (2.0 * M_PI * n));
    const double lower = upper / (1.0 + 1.0 / (12.0 * gn - 1.0));
    return {lower, upper};
}

namespace {

using M2 = Eigen::Matrix2cd;

// left side of the 2x2 su(1,1) identity:
// [[1,0],[iA-,1]] diag(e^{A3}, e^{-A3}) [[1,iA+],[0,1]]
M2 bch_left(const BchInput& in) {
    M2 l, d, r;
    l << 1, 0, cd(0, 1) * in.A_minus, 1;
    d << std::exp(in.A_3), 0, 0, std::exp(-in.A_3);
    r << 1, cd(0, 1) * in.A_plus, 0, 1;
    return l * d * r;
}

cd sinhc(cd gamma) {
    if (std::abs(gamma) < 1e-4) {
        const cd g2 = gamma * gamma;
        return 1.0 + g2 / 6.0 + g2 * g2 / 120.0;
    }
    return std::sinh(gamma) / gamma;
}

} // namespace

BchOutput bch_coefficients(const BchInput& in) {
    const M2 l = bch_left(in);
    const cd ch = 0.5 * l.trace();
    const cd sh = std::sqrt(ch * ch - 1.0);
    const cd gamma = std::asinh(sh); // principal branch
    const cd ratio = sinhc(gamma);
    if (std::abs(ratio) < 1e-12)
        throw ConfigError("bch_coefficients: singular configuration (sinh(G)/G = 0)");
    BchOutput out;
    out.Gamma = gamma;
    out.B_3 = (l(0, 0) - l(1, 1)) / (2.0 * ratio);
    out.B_plus = l(0, 1) / (cd(0, 1) * ratio);
    out.B_minus = l(1, 0) / (cd(0, 1) * ratio);
    return out;
}

double bch_matrix_check(const BchInput& in, const BchOutput& out) {
    const cd ratio = sinhc(out.Gamma);
    M2 rhs;
    rhs << out.B_3, cd(0, 1) * out.B_plus, cd(0, 1) * out.B_minus, -out.B_3;
    rhs = std::cosh(out.Gamma) * M2::Identity() + ratio * rhs;
    return (bch_left(in) - rhs).cwiseAbs().maxCoeff();
}

namespace {

std::string kind_f_description(AmplifierSpec::Kind kind) {
    switch (kind) {
        case AmplifierSpec::Kind::Number: return "|alpha|^2";
        case AmplifierSpec::Kind::Quadrature: return "Re(alpha e^(-i phi))";
        case AmplifierSpec::Kind::K: return "Im(alpha^2) + (c/2)|alpha|^2";
    }
    return {};
}

// <W^l> on the state for the amplified observable W
double target_moment(AmplifierSpec::Kind kind, double phi, const TestState& state, int l,
                     int dim) {
    if (l == 0) return 1.0;
    FockOperator w;
    switch (kind) {
        case AmplifierSpec::Kind::Number: w = number_operator(dim); break;
        case AmplifierSpec::Kind::Quadrature: w = quadrature_operator(phi, dim); break;
        case AmplifierSpec::Kind::K: w = k_operator(dim); break;
    }
    Matrix p = w.matrix;
    for (int k = 1; k < l; ++k) p = p * w.matrix;
    return expectation(FockOperator{p, "W^l"}, state.density(dim)).real();
}

} // namespace

MomentReport moment_condition_report(AmplifierSpec::Kind kind,
                                     const std::vector<double>& gains,
                                     const PhaseSpacePolynomial& f,
                                     const std::vector<TestState>& states,
                                     Efficiency eta, const MomentReportConfig& cfg) {
    if (gains.size() < 2) throw ConfigError("moment report: need at least two gains");
    for (std::size_t i = 1; i < gains.size(); ++i)
        if (gains[i] <= gains[i - 1]) throw ConfigError("moment report: gains must ascend");
    if (states.empty()) throw ConfigError("moment report: need at least one state");

    double phi = 0, c = 0;
    if (kind == AmplifierSpec::Kind::Quadrature) {
        const auto& t = f.terms();
        if (!t.count({1, 0})) throw ConfigError("moment report: f is not Re(alpha e^(-i phi))");
        phi = -std::arg(2.0 * t.at({1, 0}));
    }
    if (kind == AmplifierSpec::Kind::K && f.terms().count({1, 1}))
        c = 2.0 * f.terms().at({1, 1}).real();
    (void)c;

    GridSpec grid = cfg.grid;
    if (kind == AmplifierSpec::Kind::K && grid.size() == 0) grid = make_grid();

    MomentReport rep;
    rep.observable = kind == AmplifierSpec::Kind::Number     ? "number"
                     : kind == AmplifierSpec::Kind::Quadrature ? "quadrature"
                                                               : "k";
    rep.f_description = kind_f_description(kind);
    rep.eta = eta.eta;
    rep.gains = gains;
    for (const auto& s : states) rep.states.push_back(s.name());

    for (const auto& s : states) {
        DensityOperator rho = s.density(cfg.dim);
        GridWavefunction psi;
        if (kind == AmplifierSpec::Kind::K) psi = s.grid(grid);
        for (double g : gains) {
            AmplifierSpec spec = kind == AmplifierSpec::Kind::Number
                                     ? AmplifierSpec::number(int(std::lround(g)))
                                 : kind == AmplifierSpec::Kind::Quadrature
                                     ? AmplifierSpec::quadrature(phi, g)
                                     : AmplifierSpec::k(g);
            for (int l = 0; l <= cfg.l_max; ++l) {
                MomentRow row;
                row.state = s.name();
                row.g = g;
                row.l = l;
                row.value = kind == AmplifierSpec::Kind::K
                                ? preamp_moment(spec, f, l, psi, eta)
                                : preamp_moment(spec, f, l, rho, eta);
                row.target = target_moment(kind, phi, s, l, cfg.dim);
                row.error = row.value - row.target;
                rep.rows.push_back(row);
            }
        }
    }

    // per-l aggregate error over states, fitted on the last three gains
    const int n_fit = std::min<int>(3, static_cast<int>(gains.size()));
    bool all_converge = true;
    for (int l = 1; l <= cfg.l_max; ++l) {
        std::vector<double> per_gain(gains.size(), 0.0);
        for (const auto& row : rep.rows)
            if (row.l == l)
                for (std::size_t gi = 0; gi < gains.size(); ++gi)
                    if (row.g == gains[gi]) per_gain[gi] += std::abs(row.error) / states.size();
        MomentFit fit;
        fit.l = l;
        bool tiny = true;
        for (double e : per_gain) tiny = tiny && e < cfg.zero_error_floor;
        if (tiny) {
            fit.exponent = 99;
        } else {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (int i = 0; i < n_fit; ++i) {
                const std::size_t gi = gains.size() - n_fit + i;
                const double x = std::log(gains[gi]);
                const double y = std::log(std::max(per_gain[gi], 1e-300));
                sx += x; sy += y; sxx += x * x; sxy += x * y;
            }
            const double slope = (n_fit * sxy - sx * sy) / (n_fit * sxx - sx * sx);
            fit.exponent = -slope;
            if (fit.exponent < cfg.convergence_exponent_floor) all_converge = false;
        }
        rep.fits.push_back(fit);
    }

    // value/target ratio for the highest l at the top gain, state-averaged
    double ratio = 0;
    int nr = 0;
    for (const auto& row : rep.rows)
        if (row.l == cfg.l_max && row.g == gains.back() && std::abs(row.target) > 1e-9) {
            ratio += row.value / row.target;
            ++nr;
        }
    rep.limit_ratio = nr ? ratio / nr : 1.0;
    rep.verdict = all_converge ? "converges" : "diverges-from-target";
    return rep;
}

std::string MomentReport::to_json() const {
    json j;
    j["observable"] = observable;
    j["f"] = f_description;
    j["eta"] = eta;
    j["states"] = states;
    j["gains"] = gains;
    j["rows"] = json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"state", r.state},
                             {"g", r.g},
                             {"l", r.l},
                             {"value", r.value},
                             {"target", r.target},
                             {"error", r.error}});
    j["fit"] = json::array();
    for (const auto& f : fits) j["fit"].push_back({{"l", f.l}, {"exponent", f.exponent}});
    j["limit_ratio"] = limit_ratio;
    j["verdict"] = verdict;
    return j.dump(2);
}

CounterexampleReport k_counterexample_report(double c, const std::vector<TestState>& states,
                                             const std::vector<double>& gains,
                                             const CounterexampleConfig& cfg) {
    if (states.empty()) throw ConfigError("counterexample report: need at least one state");
    if (gains.empty()) throw ConfigError("counterexample report: need at least one gain");
    GridSpec grid = cfg.grid;
    if (grid.size() == 0) grid = make_grid();
    const PhaseSpacePolynomial f = PhaseSpacePolynomial::k_family(c);
    const Efficiency eta(1.0);

    CounterexampleReport rep;
    rep.c = c;
    rep.gains = gains;
    bool diverges = true;
    for (const auto& s : states) {
        CounterexampleStateRow row;
        row.state = s.name();
        const DensityOperator rho = s.density(cfg.dim);
        const FockOperator k = k_operator(cfg.dim);
        Matrix p = k.matrix;
        double km[4];
        for (int i = 0; i < 4; ++i) {
            km[i] = expectation(FockOperator{p, "K^l"}, rho).real();
            p = p * k.matrix;
        }
        row.k_mean = km[0];
        row.k2 = km[1];
        row.k3 = km[2];
        row.k4 = km[3];
        const GridWavefunction psi = s.grid(grid);
        row.k2_grid = grid_expectation_k2(psi);

        for (double g : gains) {
            CounterexampleStateRow::GainRow gr;
            gr.g = g;
            const AmplifierSpec spec = AmplifierSpec::k(g);
            gr.grid_l0 = preamp_moment(spec, f, 0, psi, eta);
            gr.grid_l1 = preamp_moment(spec, f, 1, psi, eta);
            gr.grid_l2 = preamp_moment(spec, f, 2, psi, eta);
            // asymptotic operator route: Gaussian POVM with mean K + g c K^2/8
            // and variance K^2/4
            const double beta = g * c / 8.0;
            gr.asym_l1 = row.k_mean + beta * row.k2;
            gr.asym_l2 = row.k2 + 2.0 * beta * row.k3 + beta * beta * row.k4 + 0.25 * row.k2;
            gr.grid_ratio = row.k2 > 1e-12 ? gr.grid_l2 / row.k2 : 0.0;
            row.gains.push_back(gr);
        }
        row.asym_ratio = row.k2 > 1e-12 ? row.gains.back().asym_l2 / row.k2 : 0.0;
        if (row.k2 > 1e-12 && row.gains.back().grid_ratio < 1.2) diverges = false;
        rep.states.push_back(std::move(row));
    }
    rep.verdict = diverges ? "diverges-from-target" : "converges";
    return rep;
}

std::string CounterexampleReport::to_json() const {
    json j;
    j["c"] = c;
    j["gains"] = gains;
    j["states"] = json::array();
    for (const auto& s : states) {
        json js;
        js["state"] = s.state;
        js["k_moments"] = {{"k", s.k_mean}, {"k2", s.k2}, {"k3", s.k3}, {"k4", s.k4}};
        js["k2_grid"] = s.k2_grid;
        js["rows"] = json::array();
        for (const auto& g : s.gains)
            js["rows"].push_back({{"g", g.g},
                                  {"grid_l0", g.grid_l0},
                                  {"grid_l1", g.grid_l1},
                                  {"grid_l2", g.grid_l2},
                                  {"asym_l1", g.asym_l1},
                                  {"asym_l2", g.asym_l2},
                                  {"grid_ratio", g.grid_ratio}});
        js["asym_ratio"] = s.asym_ratio;
        j["states"].push_back(js);
    }
    j["verdict"] = verdict;
    return j.dump(2);
}

} // namespace hetamp
