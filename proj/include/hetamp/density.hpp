#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace hetamp {

/// Tabulated probability density p(u) over outcome values with integration
/// metadata.  weights are the quadrature weights attached to the support
/// nodes, so sum(density * weights) is the total mass.
struct OutcomeDensity {
    Eigen::VectorXd support;
    Eigen::VectorXd density;
    Eigen::VectorXd weights;
    std::string method = "analytic"; // analytic | quadrature2d | monte-carlo
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double mass() const { return (density.array() * weights.array()).sum(); }
    double moment(int l) const;
    double mean() const { return moment(1) / mass(); }
    double variance() const;
};

/// Trapezoid weights for an arbitrary strictly increasing node array.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& nodes);

} // namespace hetamp
