#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>

#include "hetamp/polynomial.hpp"

namespace hetamp {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Normalized pure state in the truncated Fock basis |0>..|dim-1>.
class StateVector {
public:
    explicit StateVector(Vector amplitudes);

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    cd coeff(int n) const { return amps_(n); }

private:
    Vector amps_;
};

/// Mixed state: Hermitian, unit-trace, positive semidefinite dim x dim matrix.
class DensityOperator {
public:
    static DensityOperator pure(const StateVector& psi);
    static DensityOperator from_matrix(Matrix m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double diagonal(int n) const { return m_(n, n).real(); }
    double mean_photon_number() const;

private:
    explicit DensityOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

struct FockOperator {
    Matrix matrix;
    std::string label;
    int dim() const { return static_cast<int>(matrix.rows()); }
};

struct CoherentResult {
    StateVector state;
    double tail_mass;
};

/// |beta> truncated to dim levels; throws TruncationError when the discarded
/// tail mass exceeds tail_threshold.
CoherentResult coherent_state(cd beta, int dim, double tail_threshold = 1e-10);

std::pair<FockOperator, FockOperator> ladder_operators(int dim); // (a, a^dag)
FockOperator number_operator(int dim);
FockOperator quadrature_operator(double phi, int dim); // (a^dag e^{i phi} + a e^{-i phi})/2
FockOperator k_operator(int dim);                      // -(i/2)(a^2 - a^dag^2)

/// sum c_{mn} a^m a^dag^n (all annihilators on the left).
FockOperator anti_normal_operator(const PhaseSpacePolynomial& f, int dim);

cd expectation(const FockOperator& op, const DensityOperator& rho);
cd expectation(const FockOperator& op, const StateVector& psi);

} // namespace hetamp
