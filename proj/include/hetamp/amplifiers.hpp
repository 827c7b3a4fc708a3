#pragma once

#include <cstdint>
#include <string>

#include "hetamp/density.hpp"
#include "hetamp/fock.hpp"
#include "hetamp/grid.hpp"
#include "hetamp/heterodyne.hpp"

namespace hetamp {

/// Tagged choice of ideal coherence-preserving amplifier with gain.
/// Number gains must be integers (the spectrum N must map into itself);
/// Quadrature and K gains are real >= 1.
struct AmplifierSpec {
    enum class Kind { Number, Quadrature, K };

    Kind kind;
    double gain;
    double phi = 0.0; // Quadrature only

    static AmplifierSpec number(int g);
    static AmplifierSpec quadrature(double phi, double g);
    static AmplifierSpec k(double g);

    std::string observable_name() const;
};

struct PreampDensity {
    OutcomeDensity base;
    double gain = 1.0;
    std::string observable;
    double eta = 1.0;
    bool rescaled = true;
};

/// rho'_{gm,gn} = rho_{mn} via the isometry V = sum |gn><n|.
/// dim_out defaults to g*(dim-1)+1; must accommodate g*(dim-1).
DensityOperator number_amplify(const DensityOperator& rho, int g, int dim_out = 0);

/// p_n^{(g)}(h) = g e^{-gh} (gh)^{gn} / (gn)!, log-domain.
double preamp_number_weight(int n, int g, double h);

PreampDensity preamp_number_density(const DensityOperator& rho, int g, Efficiency eta,
                                    const Eigen::VectorXd& h_grid,
                                    std::size_t mc_samples = 200000,
                                    std::uint64_t seed = 0);

/// Dilation (U psi)(x) = g^{-1/2} psi(x/g) in the phi-rotated representation,
/// so that the measured quadrature satisfies U^dag X_phi U = g X_phi.
GridWavefunction quadrature_amplifier_apply(const GridWavefunction& psi, double phi,
                                            double g, int n_max = 64);

PreampDensity preamp_quadrature_density(const DensityOperator& rho, double phi, double g,
                                        Efficiency eta, const Eigen::VectorXd& x_grid);

/// (U_g psi)(x) = g^{1/2} |x|^{(g-1)/2} psi(x^{*g}); Lagrange interpolation in
/// log|x|.  Renormalizes; the pre-renormalization drift |norm - 1| is written
/// to *drift when given.  Throws ResolutionError when it exceeds 1e-4.
GridWavefunction k_amplifier_apply(const GridWavefunction& psi, double g,
                                   double* drift = nullptr);

/// g^{-l} * moment of the preamplified POVM: int A_g[dH_f(gu)] u^l on the
/// state.  Number and Quadrature specs take the Fock state; the K spec works
/// on the grid representation.
double preamp_moment(const AmplifierSpec& spec, const PhaseSpacePolynomial& f, int l,
                     const DensityOperator& state, Efficiency eta);
double preamp_moment(const AmplifierSpec& spec, const PhaseSpacePolynomial& f, int l,
                     const GridWavefunction& state, Efficiency eta);

} // namespace hetamp
