#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetamp/amplifiers.hpp"
#include "hetamp/errors.hpp"
#include "hetamp/states.hpp"

using namespace hetamp;
using std::abs;

namespace {
Eigen::VectorXd linspace(double a, double b, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = a + (b - a) * i / (n - 1);
    return v;
}

// Composite-Simpson integral of preamp_number_weight in h.
double weight_mass(int n, int g, int l) {
    double center = n > 0 ? static_cast<double>(n) : 1.0 / g;
    double width = std::sqrt(std::max(n, 1) / static_cast<double>(g)) + 1.0 / g;
    double lo = std::max(0.0, center - 14 * width);
    double hi = center + 14 * width + 2.0;
    int m = 40000; // even
    double dx = (hi - lo) / m;
    double acc = 0;
    for (int i = 0; i <= m; ++i) {
        double h = lo + i * dx;
        double f = preamp_number_weight(n, g, h) * std::pow(h, l);
        double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * f;
    }
    return acc * dx / 3.0;
}
} // namespace

TEST_CASE("number amplifier isometry") {
    auto f1 = TestState::fock(1).density(4);
    auto out = number_amplify(f1, 3);
    CHECK(out.dim() == 10);
    CHECK(abs(out.diagonal(3) - 1.0) < 1e-14);
    CHECK(abs(out.matrix().trace().real() - 1.0) < 1e-13);

    auto coh = TestState::coherent_nbar(2.0).density(32);
    auto big = number_amplify(coh, 4);
    CHECK(abs(big.mean_photon_number() - 8.0) < 1e-8);
    // coherences land on the amplified lattice
    CHECK(abs(big.matrix()(0, 4) - coh.matrix()(0, 1)) < 1e-14);

    CHECK(abs(number_amplify(coh, 1).matrix().cwiseAbs().sum() -
              coh.matrix().cwiseAbs().sum()) < 1e-12);
}

TEST_CASE("amplified intensity weights normalize with sharpened variance") {
    for (int g : {1, 10, 100}) {
        for (int n : {0, 2, 8}) {
            CHECK(abs(weight_mass(n, g, 0) - 1.0) < 1e-9);
        }
    }
    // mean = n + 1/g, variance = (n + 1/g)/g... first moment check
    CHECK(abs(weight_mass(2, 100, 1) - (2.0 + 0.01)) < 1e-8);
    CHECK(abs(weight_mass(0, 1, 1) - 1.0) < 1e-9); // plain e^{-h}
}

TEST_CASE("amplified intensity density concentrates on integers") {
    auto coh = TestState::coherent_nbar(3.0).density(40);
    auto h = linspace(0.0, 12.0, 4801);
    auto p = preamp_number_density(coh, 200, Efficiency(1.0), h);
    CHECK(p.base.method == "analytic");
    // the vacuum component rho_00 e^{-g h} is narrower than the grid step,
    // so the trapezoid mass overshoots by ~rho_00 * 1e-3 at this resolution
    CHECK(abs(p.base.mass() - 1.0) < 2e-3);
    // peak at h = 3 vs midpoint h = 3.5: comb contrast
    int i3 = 1200, imid = 1400;
    CHECK(p.base.density(i3) > 500 * p.base.density(imid));
    CHECK(abs(p.base.mean() - (3.0 + 1.0 / 200.0)) < 5e-3);
}

TEST_CASE("quadrature amplifier dilation") {
    auto spec = make_grid();
    auto vac = TestState::vacuum().grid(spec);
    auto out = quadrature_amplifier_apply(vac, 0.0, 2.0);
    CHECK(abs(out.norm() - 1.0) < 1e-10);
    CHECK(abs(quadrature_density(out).variance() - 1.0) < 1e-8); // 4 * 1/4

    auto coh = TestState::coherent(1.2).grid(spec);
    auto out3 = quadrature_amplifier_apply(coh, 0.0, 3.0);
    CHECK(abs(quadrature_density(out3).mean() - 3.6) < 1e-7);

    auto same = quadrature_amplifier_apply(coh, 0.0, 1.0);
    CHECK(abs(abs(grid_inner(same, coh)) - 1.0) < 1e-9);
}

TEST_CASE("rescaled quadrature density recovers the bare marginal") {
    auto spec = make_grid();
    auto x = linspace(-8.0, 8.0, 3201);
    auto vac = TestState::vacuum().density(8);

    auto p = preamp_quadrature_density(vac, 0.0, 10.0, Efficiency(1.0), x);
    CHECK(abs(p.base.mass() - 1.0) < 1e-8);
    // 1/4 + 1/(4 g^2)
    CHECK(abs(p.base.variance() - 0.2525) < 1e-8);

    auto p8 = preamp_quadrature_density(vac, 0.0, 2.0, Efficiency(0.8), x);
    CHECK(abs(p8.base.variance() - (0.25 + (2.0 - 0.8) / (4.0 * 0.8 * 4.0))) < 1e-8);
}

TEST_CASE("K amplifier unitarity, scaling, composition") {
    auto spec = make_grid();
    auto psi = TestState::coherent(std::polar(1.0, M_PI / 4)).grid(spec);

    double drift = 0;
    auto out = k_amplifier_apply(psi, 4.0, &drift);
    CHECK(drift < 1e-6);
    CHECK(abs(out.norm() - 1.0) < 1e-12);

    // generator scaling <K>_out = g <K>_in
    double k_in = grid_expectation_k(psi);
    double k_out = grid_expectation_k(out);
    CHECK(abs(k_out - 4.0 * k_in) < 1e-6 * std::max(1.0, abs(4.0 * k_in)));

    // Heisenberg picture: <X>_out = <X^{*1/g}>_in
    CHECK(abs(grid_moment_x(out, 1) - grid_expectation_xstar(psi, 0.25)) < 1e-7);

    // composition U_2 U_2 = U_4
    auto two = k_amplifier_apply(k_amplifier_apply(psi, 2.0), 2.0);
    CHECK((two.values - out.values).cwiseAbs().maxCoeff() /
              out.values.cwiseAbs().maxCoeff() <
          1e-6);

    auto id = k_amplifier_apply(psi, 1.0);
    CHECK((id.values - psi.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("operator-picture preamplified moments") {
    // intensity observable through the number amplifier: error is exactly 1/g
    auto f = PhaseSpacePolynomial::abs2();
    auto coh = TestState::coherent_nbar(4.0).density(64);
    for (int g : {2, 8}) {
        double m = preamp_moment(AmplifierSpec::number(g), f, 1, coh, Efficiency(1.0));
        CHECK(abs(m - (4.0 + 1.0 / g)) < 1e-10);
    }
    CHECK(abs(preamp_moment(AmplifierSpec::number(4), f, 0, coh, Efficiency(1.0)) - 1.0) <
          1e-12);

    // quadrature observable: second moment 1/4 + (2-eta)/(4 eta g^2) on vacuum
    auto fx = PhaseSpacePolynomial::re_alpha(0.0);
    auto vac = TestState::vacuum().density(8);
    double m2 = preamp_moment(AmplifierSpec::quadrature(0.0, 10.0), fx, 2, vac,
                              Efficiency(1.0));
    CHECK(abs(m2 - 0.2525) < 1e-12);
    double m2e = preamp_moment(AmplifierSpec::quadrature(0.0, 4.0), fx, 2, vac,
                               Efficiency(0.8));
    CHECK(abs(m2e - (0.25 + (2.0 - 0.8) / (4.0 * 0.8 * 16.0))) < 1e-12);

    // K-family observable on the grid: l = 1 is exactly <K> at every gain
    auto spec = make_grid();
    auto psi = TestState::coherent(std::polar(std::sqrt(2.0), M_PI / 4)).grid(spec);
    auto fk = PhaseSpacePolynomial::k_family(0.0);
    double l1 = preamp_moment(AmplifierSpec::k(8.0), fk, 1, psi, Efficiency(1.0));
    CHECK(abs(l1 - grid_expectation_k(psi)) < 1e-8);
    CHECK(abs(preamp_moment(AmplifierSpec::k(8.0), fk, 0, psi, Efficiency(1.0)) - 1.0) <
          1e-12);
}

TEST_CASE("amplifier configuration guards") {
    CHECK_THROWS_AS(AmplifierSpec::k(0.5), ConfigError);
    CHECK_THROWS_AS(AmplifierSpec::quadrature(0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(AmplifierSpec::number(0), ConfigError);
    auto coh = TestState::coherent_nbar(2.0).density(32);
    CHECK_THROWS_AS(number_amplify(coh, 4, 10), TruncationError);
}
