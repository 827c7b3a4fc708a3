#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetamp/errors.hpp"
#include "hetamp/heterodyne.hpp"
#include "hetamp/states.hpp"

using namespace hetamp;
using std::abs;

namespace {
Eigen::VectorXd linspace(double a, double b, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = a + (b - a) * i / (n - 1);
    return v;
}
} // namespace

TEST_CASE("Husimi function point values") {
    auto vac = TestState::vacuum().density(32);
    CHECK(abs(q_function(vac, 0.0) - 1.0 / M_PI) < 1e-13);
    CHECK(abs(q_function(vac, cd(1.0, 0.0)) - std::exp(-1.0) / M_PI) < 1e-13);

    auto coh = TestState::coherent(cd(0.5, -0.3)).density(32);
    CHECK(abs(q_function(coh, cd(0.5, -0.3)) - 1.0 / M_PI) < 1e-10);

    auto f1 = TestState::fock(1).density(8);
    CHECK(q_function(f1, 0.0) < 1e-14);

    CHECK_THROWS_AS(q_function(vac, cd(40.0, 0.0)), TruncationError);
}

TEST_CASE("sampler statistics and determinism") {
    auto vac = TestState::vacuum().density(4);
    auto s = heterodyne_sample(vac, 100000, Efficiency(1.0), 42);
    double m_abs2 = 0, m_re = 0;
    for (cd a : s.values) {
        m_abs2 += std::norm(a);
        m_re += a.real();
    }
    m_abs2 /= s.values.size();
    m_re /= s.values.size();
    // E|alpha|^2 = 1 for vacuum (Exp(1) radial profile), SE ~ 1/sqrt(n)
    CHECK(abs(m_abs2 - 1.0) < 0.012);
    CHECK(abs(m_re) < 0.008);

    auto s2 = heterodyne_sample(vac, 100000, Efficiency(1.0), 42);
    CHECK(s.values == s2.values);
    auto s3 = heterodyne_sample(vac, 100, Efficiency(1.0), 43);
    CHECK(s.values[0] != s3.values[0]);
}

TEST_CASE("sampler with detector loss") {
    // eta = 0.5: E|alpha|^2 = 1 + Delta^2 = 2 for vacuum
    auto vac = TestState::vacuum().density(4);
    auto s = heterodyne_sample(vac, 100000, Efficiency(0.5), 7);
    double m = 0;
    for (cd a : s.values) m += std::norm(a);
    m /= s.values.size();
    CHECK(abs(m - 2.0) < 0.04);

    // coherent displacement survives the smearing
    auto coh = TestState::coherent(3.0).density(48);
    auto sc = heterodyne_sample(coh, 50000, Efficiency(0.8), 7);
    double mr = 0;
    for (cd a : sc.values) mr += a.real();
    CHECK(abs(mr / sc.values.size() - 3.0) < 0.03);
}

TEST_CASE("intensity marginal density") {
    auto vac = TestState::vacuum().density(8);
    auto h = linspace(0.0, 20.0, 2001);
    auto p = number_marginal_density(vac, Efficiency(1.0), h);
    CHECK(abs(p.density(0) - 1.0) < 1e-12); // e^{-h} at h = 0
    CHECK(abs(p.mass() - 1.0) < 1e-4);
    CHECK(abs(p.mean() - 1.0) < 1e-4);

    auto coh = TestState::coherent(2.0).density(48);
    auto h2 = linspace(0.0, 40.0, 4001);
    auto pc = number_marginal_density(coh, Efficiency(1.0), h2);
    CHECK(abs(pc.mean() - 5.0) < 1e-4); // |beta|^2 + 1
}

TEST_CASE("quadrature marginal density") {
    auto x = linspace(-10.0, 10.0, 4001);
    auto vac = TestState::vacuum().density(8);

    auto p1 = quadrature_marginal_density(vac, 0.0, Efficiency(1.0), x);
    CHECK(abs(p1.mass() - 1.0) < 1e-8);
    // vacuum quadrature (variance 1/4) + ideal heterodyne kernel (1/4) -> 1/2
    CHECK(abs(p1.variance() - 0.5) < 1e-8);

    auto p08 = quadrature_marginal_density(vac, 0.0, Efficiency(0.8), x);
    CHECK(abs(p08.variance() - (0.25 + (2.0 - 0.8) / (4.0 * 0.8))) < 1e-8);

    auto coh = TestState::coherent(cd(0.0, 1.5)).density(48);
    auto p90 = quadrature_marginal_density(coh, M_PI / 2, Efficiency(1.0), x);
    CHECK(abs(p90.mean() - 1.5) < 1e-8);
}

TEST_CASE("generic marginal agrees with the specialized routes") {
    auto coh = TestState::coherent(1.0).density(32);

    auto pm = generic_marginal_density(coh, PhaseSpacePolynomial::abs2(),
                                       Efficiency(1.0), 200,
                                       MarginalMethod::MonteCarlo, 400000, 11);
    CHECK(abs(pm.mass() - 1.0) < 2e-4);
    CHECK(abs(pm.mean() - 2.0) < 0.03); // |beta|^2 + 1

    auto pq = generic_marginal_density(coh, PhaseSpacePolynomial::re_alpha(0.0),
                                       Efficiency(1.0), 200,
                                       MarginalMethod::Quadrature2d);
    CHECK(abs(pq.mass() - 1.0) < 1e-4);
    CHECK(abs(pq.mean() - 1.0) < 1e-3);
    CHECK(abs(pq.variance() - 0.5) < 1e-3);
}

TEST_CASE("outcome moments via anti-normal ordering") {
    auto f = PhaseSpacePolynomial::abs2();

    auto vac = TestState::vacuum().density(16);
    CHECK(abs(heterodyne_moment(f, 0, vac, Efficiency(1.0)) - 1.0) < 1e-13);
    CHECK(abs(heterodyne_moment(f, 1, vac, Efficiency(1.0)) - 1.0) < 1e-12);
    CHECK(abs(heterodyne_moment(f, 2, vac, Efficiency(1.0)) - 2.0) < 1e-12);

    auto n3 = TestState::fock(3).density(16);
    // l = 2 on |n>: (n+1)(n+2) = 20
    CHECK(abs(heterodyne_moment(f, 2, n3, Efficiency(1.0)) - 20.0) < 1e-11);

    // eta = 0.5 adds Delta^2 = 1 per power: coherent |beta|^2 = 4 -> 4 + 1 + 1 = 6
    auto coh = TestState::coherent(2.0).density(48);
    CHECK(abs(heterodyne_moment(f, 1, coh, Efficiency(0.5)) - 6.0) < 1e-9);

    // quadrature observable: second moment of the smeared marginal
    auto fx = PhaseSpacePolynomial::re_alpha(0.0);
    CHECK(abs(heterodyne_moment(fx, 2, vac, Efficiency(1.0)) - 0.5) < 1e-12);
}
