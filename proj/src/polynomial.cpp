#include "hetamp/polynomial.hpp"

#include <cmath>
#include <cstdlib>

#include "hetamp/errors.hpp"

namespace hetamp {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace

PhaseSpacePolynomial PhaseSpacePolynomial::constant(cd value) {
    return monomial(0, 0, value);
}

PhaseSpacePolynomial PhaseSpacePolynomial::monomial(int m, int n, cd coeff) {
    if (m < 0 || n < 0) throw ConfigError("monomial powers must be nonnegative");
    PhaseSpacePolynomial p;
    p.add_term(m, n, coeff);
    return p;
}

PhaseSpacePolynomial PhaseSpacePolynomial::abs2() { return monomial(1, 1); }

PhaseSpacePolynomial PhaseSpacePolynomial::re_alpha(double phi) {
    PhaseSpacePolynomial p;
    const cd e = std::exp(cd(0, -phi));
    p.add_term(1, 0, 0.5 * e);
    p.add_term(0, 1, 0.5 * std::conj(e));
    return p;
}

PhaseSpacePolynomial PhaseSpacePolynomial::im_alpha2() {
    PhaseSpacePolynomial p;
    p.add_term(2, 0, cd(0, -0.5));
    p.add_term(0, 2, cd(0, 0.5));
    return p;
}

PhaseSpacePolynomial PhaseSpacePolynomial::k_family(double c) {
    PhaseSpacePolynomial p = im_alpha2();
    if (c != 0.0) p.add_term(1, 1, 0.5 * c);
    return p;
}

void PhaseSpacePolynomial::add_term(int m, int n, cd coeff) {
    auto key = Key{m, n};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (coeff != cd(0)) terms_.emplace(key, coeff);
    } else {
        it->second += coeff;
        if (std::abs(it->second) == 0.0) terms_.erase(it);
    }
}

int PhaseSpacePolynomial::max_degree() const {
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max({d, key.first, key.second});
    return d;
}

bool PhaseSpacePolynomial::is_real() const {
    for (const auto& [key, c] : terms_) {
        auto it = terms_.find(Key{key.second, key.first});
        const cd mirror = (it == terms_.end()) ? cd(0) : it->second;
        if (std::abs(mirror - std::conj(c)) > 1e-12) return false;
    }
    return true;
}

cd PhaseSpacePolynomial::evaluate(cd alpha) const {
    cd r = 0;
    const cd ac = std::conj(alpha);
    for (const auto& [key, c] : terms_)
        r += c * std::pow(alpha, key.first) * std::pow(ac, key.second);
    return r;
}

double PhaseSpacePolynomial::evaluate_real(cd alpha) const {
    return evaluate(alpha).real();
}

PhaseSpacePolynomial PhaseSpacePolynomial::operator*(const PhaseSpacePolynomial& other) const {
    PhaseSpacePolynomial p;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : other.terms_)
            p.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return p;
}

PhaseSpacePolynomial PhaseSpacePolynomial::operator+(const PhaseSpacePolynomial& other) const {
    PhaseSpacePolynomial p = *this;
    for (const auto& [k, c] : other.terms_) p.add_term(k.first, k.second, c);
    return p;
}

PhaseSpacePolynomial PhaseSpacePolynomial::pow(int l) const {
    if (l < 0) throw ConfigError("polynomial power must be nonnegative");
    PhaseSpacePolynomial r = constant(1.0);
    for (int i = 0; i < l; ++i) r = r * (*this);
    return r;
}

PhaseSpacePolynomial PhaseSpacePolynomial::gamma_smear(double sigma2) const {
    if (sigma2 == 0.0) return *this;
    PhaseSpacePolynomial p;
    for (const auto& [key, c] : terms_) {
        const int m = key.first, n = key.second;
        for (int r = 0; r <= std::min(m, n); ++r) {
            const double w = binom(m, r) * binom(n, r) * factorial(r) * std::pow(sigma2, r);
            p.add_term(m - r, n - r, c * w);
        }
    }
    return p;
}

} // namespace hetamp
