#include "hetamp/density.hpp"

#include <cmath>

#include "hetamp/errors.hpp"

namespace hetamp {

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
    const int n = static_cast<int>(grid.size());
    if (n < 2) throw ConfigError("trapezoid_weights: need at least two nodes");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i + 1 < n; ++i) {
        const double h = grid(i + 1) - grid(i);
        if (h <= 0) throw ConfigError("trapezoid_weights: grid must be increasing");
        w(i) += 0.5 * h;
        w(i + 1) += 0.5 * h;
    }
    return w;
}

double OutcomeDensity::moment(int l) const {
    double acc = 0;
    for (int i = 0; i < support.size(); ++i)
        acc += weights(i) * density(i) * std::pow(support(i), l);
    return acc;
}

double OutcomeDensity::variance() const {
    const double m = mass();
    const double mu = moment(1) / m;
    return moment(2) / m - mu * mu;
}

} // namespace hetamp
