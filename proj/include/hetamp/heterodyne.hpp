#pragma once

#include <cstdint>
#include <vector>

#include "hetamp/density.hpp"
#include "hetamp/fock.hpp"

namespace hetamp {

/// Detector quantum efficiency eta in (0,1]; the outcome-plane smearing
/// variance is Delta^2 = (1-eta)/eta.
struct Efficiency {
    double eta = 1.0;

    Efficiency() = default;
    explicit Efficiency(double e);
    double delta2() const { return (1.0 - eta) / eta; }
    bool ideal() const { return eta == 1.0; }
};

struct ComplexOutcomeSample {
    std::vector<cd> values;
    double eta = 1.0;
    std::uint64_t seed = 0;
};

/// Husimi Q at alpha: <alpha|rho|alpha>/pi.
double q_function(const DensityOperator& rho, cd alpha);

/// i.i.d. samples from Q smeared by Gaussian((1-eta)/eta), deterministic per
/// seed.  Rejection sampling from a Fock-diagonal mixture envelope.
ComplexOutcomeSample heterodyne_sample(const DensityOperator& rho, std::size_t count,
                                       Efficiency eta, std::uint64_t seed);

/// p(h) = sum_n rho_nn e^{-h} h^n / n! for eta = 1 (log-domain); for eta < 1
/// the density is estimated by Monte Carlo binning of |alpha|^2.
OutcomeDensity number_marginal_density(const DensityOperator& rho, Efficiency eta,
                                       const Eigen::VectorXd& h_grid,
                                       std::size_t mc_samples = 200000,
                                       std::uint64_t seed = 0);

/// Quadrature distribution at angle phi convolved with the heterodyne kernel
/// of variance (2-eta)/(4 eta).
OutcomeDensity quadrature_marginal_density(const DensityOperator& rho, double phi,
                                           Efficiency eta, const Eigen::VectorXd& x_grid);

/// Plain |psi_phi(x)|^2 marginal of rho (no heterodyne kernel); shared by the
/// quadrature POVM and its preamplified variant.
OutcomeDensity rho_quadrature_density(const DensityOperator& rho, double phi,
                                      const Eigen::VectorXd& x_grid);

enum class MarginalMethod { MonteCarlo, Quadrature2d };

/// Histogram / quadrature estimate of p(w) = int d^2a p(a) delta(w - f(a)).
OutcomeDensity generic_marginal_density(const DensityOperator& rho,
                                        const PhaseSpacePolynomial& f, Efficiency eta,
                                        int bins, MarginalMethod method,
                                        std::size_t samples = 1000000,
                                        std::uint64_t seed = 0);

/// int p(w) w^l dw, operator-analytic: Tr[rho :Gamma_{Delta^2}[f^l]:_A].
double heterodyne_moment(const PhaseSpacePolynomial& f, int l,
                         const DensityOperator& rho, Efficiency eta);

} // namespace hetamp
