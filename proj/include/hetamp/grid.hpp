#pragma once

#include <Eigen/Dense>

#include "hetamp/density.hpp"
#include "hetamp/fock.hpp"

namespace hetamp {

/// Symmetric nonuniform quadrature grid: log-spaced nodes on +-[log_floor,
/// half_width] plus a midpoint-rule patch through 0.  The log regions are
/// uniform in t = log|x|, which is where the K-amplifier pullback stays
/// smooth.  Weights are end-corrected (fourth-order) trapezoid weights in t.
struct GridSpec {
    Eigen::VectorXd nodes;   // strictly increasing, symmetric about 0
    Eigen::VectorXd weights; // positive
    double half_width = 0;
    double log_floor = 0;
    int points_per_side = 0;
    int patch_per_side = 0;
    double log_step = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

GridSpec make_grid(double half_width = 32.0, int points_per_side = 4000,
                   double log_floor = 1e-8, int patch_per_side = 8);

/// Pure state sampled on a GridSpec, psi(x) at nodes, unit L2 norm.
struct GridWavefunction {
    GridSpec spec;
    Vector values;

    double norm() const;
};

/// Sign-preserving power x^{*g} = sgn(x) |x|^g, log-domain for extreme |x|.
double x_star_power(double x, double g);

/// Orthonormal oscillator eigenfunctions h_n(x) under the X-variance-1/4
/// convention, h_0(x) = (2/pi)^{1/4} e^{-x^2}.  Row n holds h_n at the nodes.
Eigen::MatrixXd hermite_functions(int n_max, const Eigen::VectorXd& x);

/// Throws ResolutionError when the renormalization drift exceeds 1e-6.
GridWavefunction fock_to_grid(const StateVector& psi, const GridSpec& spec);
StateVector grid_to_fock(const GridWavefunction& psi, int n_max);

OutcomeDensity quadrature_density(const GridWavefunction& psi);

/// Convolution with a normal kernel of the given variance by direct weighted
/// summation.  Kernels narrower than the local node spacing act as the
/// identity; kernels wider than the grid span are rejected.
OutcomeDensity gaussian_convolve(const OutcomeDensity& p, double variance);

cd grid_inner(const GridWavefunction& a, const GridWavefunction& b);

/// x * dpsi/dx at every node; O(h^6) central stencils in t = log|x|.
Vector scaled_derivative(const GridWavefunction& psi);

/// K psi with K = -i (x d/dx + 1/2).
Vector apply_k(const GridWavefunction& psi);
/// a psi with a = x + (1/2) d/dx.
Vector apply_annihilation(const GridWavefunction& psi);

double grid_expectation_k(const GridWavefunction& psi);
double grid_expectation_k2(const GridWavefunction& psi);
double grid_expectation_k3(const GridWavefunction& psi);
double grid_expectation_k4(const GridWavefunction& psi);
double grid_expectation_n(const GridWavefunction& psi);
/// <psi| X^{*p} |psi> (multiplication operator).
double grid_expectation_xstar(const GridWavefunction& psi, double p);
double grid_moment_x(const GridWavefunction& psi, int k);

} // namespace hetamp
