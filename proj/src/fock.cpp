#include "hetamp/fock.hpp"

#include <cmath>

#include "hetamp/errors.hpp"

namespace hetamp {

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 2) throw ConfigError("StateVector requires dim >= 2");
    const double n = amps_.norm();
    if (n < 1e-14) throw ConfigError("StateVector amplitudes have zero norm");
    amps_ /= n;
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::from_matrix(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 2)
        throw ConfigError("DensityOperator requires a square matrix, dim >= 2");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw ConfigError("DensityOperator not Hermitian (residual " +
                                        std::to_string(herm) + ")");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw ConfigError("DensityOperator trace differs from 1 by " +
                          std::to_string(tr - 1.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ConfigError("DensityOperator not positive semidefinite");
    return DensityOperator(std::move(m));
}

double DensityOperator::mean_photon_number() const {
    double s = 0;
    for (int n = 0; n < dim(); ++n) s += n * diagonal(n);
    return s;
}

CoherentResult coherent_state(cd beta, int dim, double tail_threshold) {
    if (dim < 2) throw ConfigError("coherent_state requires dim >= 2");
    Vector amps = Vector::Zero(dim);
    if (std::abs(beta) == 0.0) {
        amps(0) = 1.0;
        return {StateVector(std::move(amps)), 0.0};
    }
    // c_n = exp(-|b|^2/2 + n log b - lgamma(n+1)/2), log-domain
    const double b2 = std::norm(beta);
    const double lnb = std::log(std::abs(beta));
    const double arg = std::arg(beta);
    double kept = 0;
    for (int n = 0; n < dim; ++n) {
        const double lm = -0.5 * b2 + n * lnb - 0.5 * std::lgamma(n + 1.0);
        amps(n) = std::exp(lm) * std::exp(cd(0, n * arg));
        kept += std::exp(2 * lm);
    }
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > tail_threshold)
        throw TruncationError("coherent_state tail mass " + std::to_string(tail) +
                              " exceeds threshold at dim " + std::to_string(dim));
    return {StateVector(std::move(amps)), tail};
}

std::pair<FockOperator, FockOperator> ladder_operators(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    Matrix ad = a.adjoint();
    return {FockOperator{std::move(a), "a"}, FockOperator{std::move(ad), "a†"}};
}

FockOperator number_operator(int dim) {
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = double(n);
    return {std::move(m), "N"};
}

FockOperator quadrature_operator(double phi, int dim) {
    auto [a, ad] = ladder_operators(dim);
    Matrix m = 0.5 * (ad.matrix * std::exp(cd(0, phi)) + a.matrix * std::exp(cd(0, -phi)));
    return {std::move(m), "X_phi"};
}

FockOperator k_operator(int dim) {
    auto [a, ad] = ladder_operators(dim);
    const Matrix a2 = a.matrix * a.matrix;
    Matrix m = cd(0, -0.5) * (a2 - Matrix(a2.adjoint()));
    return {std::move(m), "K"};
}

FockOperator anti_normal_operator(const PhaseSpacePolynomial& f, int dim) {
    if (f.max_degree() + 2 > dim)
        throw TruncationError("anti_normal_operator: polynomial degree " +
                              std::to_string(f.max_degree()) + " too high for dim " +
                              std::to_string(dim));
    auto [a, ad] = ladder_operators(dim);
    // cache powers a^m and a^dag^n
    const int d = f.max_degree();
    std::vector<Matrix> apow(d + 1), adpow(d + 1);
    apow[0] = adpow[0] = Matrix::Identity(dim, dim);
    for (int k = 1; k <= d; ++k) {
        apow[k] = apow[k - 1] * a.matrix;
        adpow[k] = adpow[k - 1] * ad.matrix;
    }
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [key, c] : f.terms()) m += c * (apow[key.first] * adpow[key.second]);
    return {std::move(m), "antinormal"};
}

cd expectation(const FockOperator& op, const DensityOperator& rho) {
    if (op.dim() != rho.dim()) throw ConfigError("expectation: dimension mismatch");
    return (rho.matrix() * op.matrix).trace();
}

cd expectation(const FockOperator& op, const StateVector& psi) {
    if (op.dim() != psi.dim()) throw ConfigError("expectation: dimension mismatch");
    return psi.amplitudes().dot(op.matrix * psi.amplitudes());
}

} // namespace hetamp
