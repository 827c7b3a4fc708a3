#pragma once

#include <complex>
#include <map>
#include <utility>

namespace hetamp {

using cd = std::complex<double>;

/// Bivariate polynomial f(alpha, conj alpha) = sum_{mn} c_{mn} alpha^m conj(alpha)^n.
/// This is the classical phase-space observable evaluated on heterodyne outcomes.
class PhaseSpacePolynomial {
public:
    using Key = std::pair<int, int>; // (power of alpha, power of conj alpha)

    PhaseSpacePolynomial() = default;

    static PhaseSpacePolynomial constant(cd value);
    static PhaseSpacePolynomial monomial(int m, int n, cd coeff = 1.0);
    static PhaseSpacePolynomial abs2();               // |alpha|^2
    static PhaseSpacePolynomial re_alpha(double phi); // Re(alpha e^{-i phi})
    static PhaseSpacePolynomial im_alpha2();          // Im(alpha^2)
    static PhaseSpacePolynomial k_family(double c);   // Im(alpha^2) + (c/2)|alpha|^2

    void add_term(int m, int n, cd coeff);
    const std::map<Key, cd>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int max_degree() const;

    /// c_{nm} == conj(c_{mn}) for every term, within 1e-12.
    bool is_real() const;

    cd evaluate(cd alpha) const;
    double evaluate_real(cd alpha) const;

    PhaseSpacePolynomial operator*(const PhaseSpacePolynomial& other) const;
    PhaseSpacePolynomial operator+(const PhaseSpacePolynomial& other) const;
    PhaseSpacePolynomial pow(int l) const;

    /// Gaussian smearing of the argument: E_beta[f(alpha + beta)] with
    /// E[beta conj(beta)] = sigma2.  Closed form on monomials:
    /// alpha^m conj^n -> sum_r C(m,r) C(n,r) r! sigma2^r alpha^{m-r} conj^{n-r}.
    PhaseSpacePolynomial gamma_smear(double sigma2) const;

private:
    std::map<Key, cd> terms_;
};

} // namespace hetamp
