#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hetamp/amplifiers.hpp"
#include "hetamp/states.hpp"

namespace hetamp {

/// Signed Stirling numbers of the first kind, exact 64-bit integers.
/// s(l, k) with x(x-1)...(x-l+1) = sum_k s(l, k) x^k.
struct StirlingTable {
    int l_max = 0;
    std::vector<std::vector<long long>> rows; // rows[l][k], 0 <= k <= l

    long long value(int l, int k) const;
};

StirlingTable stirling_first_kind(int l_max); // l_max <= 30 (64-bit safety)

/// Stirling-inequality bracket for p_n^{(g)}(h): returns (lower, upper) with
/// upper = gamma_n^{(g)}(h) and lower = upper / (1 + 1/(12 g n - 1)).
std::pair<double, double> stirling_density_bounds(int n, int g, double h);

struct BchInput {
    cd A_plus, A_minus, A_3;
};

struct BchOutput {
    cd B_plus, B_minus, B_3, Gamma;
};

/// Closed-form su(1,1) disentangling coefficients: exp(A_- k_-) exp(2 A_3 k_3)
/// exp(A_+ k_+) = exp(2 B_3 k_3 + B_+ k_+ + B_- k_-), principal arcsinh branch.
BchOutput bch_coefficients(const BchInput& in);

/// Max-entry residual of the 2x2 faithful-representation identity.
double bch_matrix_check(const BchInput& in, const BchOutput& out);

struct MomentRow {
    std::string state;
    double g = 0;
    int l = 0;
    double value = 0;
    double target = 0;
    double error = 0;
};

struct MomentFit {
    int l = 0;
    double exponent = 0; // fitted p in error ~ g^{-p}; 99 when error is ~0
};

struct MomentReport {
    std::string observable;
    std::string f_description;
    double eta = 1.0;
    std::vector<std::string> states;
    std::vector<double> gains;
    std::vector<MomentRow> rows;
    std::vector<MomentFit> fits;
    double limit_ratio = 0; // value/target for the highest l at the top gain
    std::string verdict;    // "converges" | "diverges-from-target"

    std::string to_json() const;
};

struct MomentReportConfig {
    int dim = 64;
    int l_max = 2;
    double convergence_exponent_floor = 0.8;
    double zero_error_floor = 1e-9;
    GridSpec grid; // used by the K family; default-constructed -> make_grid()
};

MomentReport moment_condition_report(AmplifierSpec::Kind kind,
                                     const std::vector<double>& gains,
                                     const PhaseSpacePolynomial& f,
                                     const std::vector<TestState>& states,
                                     Efficiency eta,
                                     const MomentReportConfig& cfg = {});

struct CounterexampleStateRow {
    std::string state;
    double k_mean = 0, k2 = 0, k3 = 0, k4 = 0; // Fock-representation moments
    double k2_grid = 0;                        // grid-stencil cross-check
    struct GainRow {
        double g = 0;
        double grid_l0 = 0, grid_l1 = 0, grid_l2 = 0;
        double asym_l1 = 0, asym_l2 = 0;
        double grid_ratio = 0; // grid_l2 / <K^2>
    };
    std::vector<GainRow> gains;
    double asym_ratio = 0; // asymptotic l=2 / <K^2>; 5/4 when c = 0
};

struct CounterexampleReport {
    double c = 0;
    std::vector<double> gains;
    std::vector<CounterexampleStateRow> states;
    std::string verdict; // "diverges-from-target" when ratio stays >= 1.2

    std::string to_json() const;
};

struct CounterexampleConfig {
    int dim = 64;
    GridSpec grid;
};

CounterexampleReport k_counterexample_report(double c, const std::vector<TestState>& states,
                                             const std::vector<double>& gains,
                                             const CounterexampleConfig& cfg = {});

} // namespace hetamp
