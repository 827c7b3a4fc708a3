#include "hetamp/grid.hpp"

#include <cmath>

#include "hetamp/errors.hpp"

namespace hetamp {

namespace {

// End-corrected trapezoid weights (fourth order) on a uniform grid of n
// points with step h.
Eigen::VectorXd gregory_weights(int n, double h) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
    const double c[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int i = 0; i < 3; ++i) {
        w(i) = c[i] * h;
        w(n - 1 - i) = c[i] * h;
    }
    return w;
}

} // namespace

GridSpec make_grid(double half_width, int points_per_side, double log_floor,
                   int patch_per_side) {
    if (log_floor <= 0 || half_width <= log_floor)
        throw ConfigError("make_grid: requires 0 < log_floor < half_width");
    if (points_per_side < 16)
        throw ConfigError("make_grid: insufficient points for requested span");
    if (patch_per_side < 1) throw ConfigError("make_grid: patch_per_side must be >= 1");

    const int pps = points_per_side;
    const double t0 = std::log(log_floor), t1 = std::log(half_width);
    const double dt = (t1 - t0) / (pps - 1);

    Eigen::VectorXd logw = gregory_weights(pps, dt);
    const int n = 2 * pps + 2 * patch_per_side;
    GridSpec spec;
    spec.nodes.resize(n);
    spec.weights.resize(n);
    spec.half_width = half_width;
    spec.log_floor = log_floor;
    spec.points_per_side = pps;
    spec.patch_per_side = patch_per_side;
    spec.log_step = dt;

    // positive log side
    for (int i = 0; i < pps; ++i) {
        const double x = std::exp(t0 + i * dt);
        spec.nodes(pps + 2 * patch_per_side + i) = x;
        spec.weights(pps + 2 * patch_per_side + i) = logw(i) * x; // dx = x dt
    }
    // mirrored negative log side
    for (int i = 0; i < pps; ++i) {
        spec.nodes(i) = -spec.nodes(n - 1 - i);
        spec.weights(i) = spec.weights(n - 1 - i);
    }
    // midpoint-rule patch on (-log_floor, log_floor), no node at 0
    const double hp = log_floor / patch_per_side;
    for (int j = 0; j < patch_per_side; ++j) {
        const double x = (j + 0.5) * hp;
        spec.nodes(pps + patch_per_side + j) = x;
        spec.weights(pps + patch_per_side + j) = hp;
        spec.nodes(pps + patch_per_side - 1 - j) = -x;
        spec.weights(pps + patch_per_side - 1 - j) = hp;
    }
    return spec;
}

double GridWavefunction::norm() const {
    return std::sqrt((values.array().abs2() * spec.weights.array()).sum());
}

double x_star_power(double x, double g) {
    if (x == 0.0) return 0.0;
    const double s = (x < 0) ? -1.0 : 1.0;
    // log-domain to dodge pow over/underflow at extreme |x|
    const double lg = g * std::log(std::abs(x));
    if (lg < -745.0) return s * 0.0; // underflow flushes to signed zero
    if (lg > 709.0) return s * std::numeric_limits<double>::infinity();
    return s * std::exp(lg);
}

Eigen::MatrixXd hermite_functions(int n_max, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd h(n_max + 1, n);
    const double c0 = std::pow(2.0 / M_PI, 0.25);
    h.row(0) = c0 * (-x.array().square()).exp();
    if (n_max >= 1) h.row(1) = 2.0 * x.array().transpose() * h.row(0).array();
    for (int k = 1; k < n_max; ++k)
        h.row(k + 1) = (2.0 / std::sqrt(k + 1.0)) * x.array().transpose() * h.row(k).array() -
                       std::sqrt(k / (k + 1.0)) * h.row(k - 1).array();
    return h;
}

GridWavefunction fock_to_grid(const StateVector& psi, const GridSpec& spec) {
    const Eigen::MatrixXd h = hermite_functions(psi.dim() - 1, spec.nodes);
    Vector v = Vector::Zero(spec.size());
    for (int k = 0; k < psi.dim(); ++k) v += psi.coeff(k) * h.row(k).transpose().cast<cd>();
    GridWavefunction out{spec, std::move(v)};
    const double n = out.norm();
    if (std::abs(n - 1.0) > 1e-6)
        throw ResolutionError("fock_to_grid: norm drift " + std::to_string(n - 1.0));
    out.values /= n;
    return out;
}

StateVector grid_to_fock(const GridWavefunction& psi, int n_max) {
    const Eigen::MatrixXd h = hermite_functions(n_max, psi.spec.nodes);
    Vector c(n_max + 1);
    const Vector weighted = psi.spec.weights.cast<cd>().array() * psi.values.array();
    for (int k = 0; k <= n_max; ++k) c(k) = h.row(k).transpose().cast<cd>().dot(weighted);
    return StateVector(std::move(c));
}

OutcomeDensity quadrature_density(const GridWavefunction& psi) {
    OutcomeDensity d;
    d.support = psi.spec.nodes;
    d.density = psi.values.array().abs2();
    d.weights = psi.spec.weights;
    d.method = "analytic";
    return d;
}

OutcomeDensity gaussian_convolve(const OutcomeDensity& p, double variance) {
    if (variance <= 0) throw ConfigError("gaussian_convolve: variance must be positive");
    const int n = static_cast<int>(p.support.size());
    const double span = p.support(n - 1) - p.support(0);
    const double sigma = std::sqrt(variance);
    if (sigma > 0.5 * span)
        throw ConfigError("gaussian_convolve: kernel wider than grid span");

    // kernels narrower than the local spacing act as the identity
    double med = 0;
    {
        Eigen::VectorXd sp = p.support.segment(1, n - 1) - p.support.segment(0, n - 1);
        std::vector<double> v(sp.data(), sp.data() + sp.size());
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        med = v[v.size() / 2];
    }
    if (sigma < 2.0 * med) {
        OutcomeDensity out = p;
        return out;
    }

    OutcomeDensity out;
    out.support = p.support;
    out.weights = p.weights;
    out.method = p.method;
    out.density.resize(n);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * variance);
    const double inv2v = 0.5 / variance;
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        const double xi = p.support(i);
        for (int j = 0; j < n; ++j) {
            const double d = xi - p.support(j);
            const double e = d * d * inv2v;
            if (e < 40.0) acc += p.weights(j) * p.density(j) * std::exp(-e);
        }
        out.density(i) = norm * acc;
    }
    return out;
}

cd grid_inner(const GridWavefunction& a, const GridWavefunction& b) {
    return (a.values.conjugate().array() * b.values.array() *
            a.spec.weights.cast<cd>().array())
        .sum();
}

Vector scaled_derivative(const GridWavefunction& psi) {
    const GridSpec& s = psi.spec;
    const int pps = s.points_per_side;
    const int patch = s.patch_per_side;
    const int n = s.size();
    const double dt = s.log_step;
    Vector out = Vector::Zero(n);
    // O(h^6) central stencil for d/dt on the uniform-in-log sides; on both
    // sides t increases away from zero, and x dpsi/dx = dpsi/dt there.
    static const double c6[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    auto side_derivative = [&](int base, int dir) {
        // base: index of the |x| = log_floor end of this side; dir: +1/-1 step
        // toward growing |x|
        for (int i = 0; i < pps; ++i) {
            const int idx = base + dir * i;
            cd acc = 0;
            if (i >= 3 && i < pps - 3) {
                for (int k = -3; k <= 3; ++k) acc += c6[k + 3] * psi.values(base + dir * (i + k));
                out(idx) = acc / dt;
            } else if (i >= 1 && i < pps - 1) {
                out(idx) = (psi.values(base + dir * (i + 1)) - psi.values(base + dir * (i - 1))) /
                           (2.0 * dt);
            } else if (i == 0) {
                out(idx) = (psi.values(base + dir) - psi.values(base)) / dt;
            } else {
                out(idx) = (psi.values(idx) - psi.values(base + dir * (i - 1))) / dt;
            }
        }
    };
    side_derivative(n - pps, +1);    // positive side, stored ascending in t
    side_derivative(pps - 1, -1);    // negative side, ascending t toward index 0
    // patch: nonuniform central differences; x ~ 0 so the x * psi' factor is tiny
    for (int i = pps; i < pps + 2 * patch; ++i) {
        const double dx = s.nodes(i + 1) - s.nodes(i - 1);
        out(i) = s.nodes(i) * (psi.values(i + 1) - psi.values(i - 1)) / dx;
    }
    return out;
}

Vector apply_k(const GridWavefunction& psi) {
    return cd(0, -1) * (scaled_derivative(psi) + 0.5 * psi.values);
}

Vector apply_annihilation(const GridWavefunction& psi) {
    const Vector xd = scaled_derivative(psi);
    Vector out(psi.spec.size());
    for (int i = 0; i < psi.spec.size(); ++i) {
        const double x = psi.spec.nodes(i);
        out(i) = x * psi.values(i) + 0.5 * (xd(i) / x);
    }
    return out;
}

namespace {
double weighted_norm2(const GridSpec& s, const Vector& v) {
    return (v.array().abs2() * s.weights.array()).sum();
}
} // namespace

double grid_expectation_k(const GridWavefunction& psi) {
    const Vector kv = apply_k(psi);
    return (psi.values.conjugate().array() * kv.array() * psi.spec.weights.cast<cd>().array())
        .sum()
        .real();
}

double grid_expectation_k2(const GridWavefunction& psi) {
    return weighted_norm2(psi.spec, apply_k(psi));
}

double grid_expectation_k3(const GridWavefunction& psi) {
    GridWavefunction kpsi{psi.spec, apply_k(psi)};
    const Vector k2psi = apply_k(kpsi);
    return (kpsi.values.conjugate().array() * k2psi.array() *
            psi.spec.weights.cast<cd>().array())
        .sum()
        .real();
}

double grid_expectation_k4(const GridWavefunction& psi) {
    GridWavefunction kpsi{psi.spec, apply_k(psi)};
    return weighted_norm2(psi.spec, apply_k(kpsi));
}

double grid_expectation_n(const GridWavefunction& psi) {
    return weighted_norm2(psi.spec, apply_annihilation(psi));
}

double grid_expectation_xstar(const GridWavefunction& psi, double p) {
    double acc = 0;
    for (int i = 0; i < psi.spec.size(); ++i)
        acc += x_star_power(psi.spec.nodes(i), p) * std::norm(psi.values(i)) *
               psi.spec.weights(i);
    return acc;
}

double grid_moment_x(const GridWavefunction& psi, int k) {
    double acc = 0;
    for (int i = 0; i < psi.spec.size(); ++i)
        acc += std::pow(psi.spec.nodes(i), k) * std::norm(psi.values(i)) * psi.spec.weights(i);
    return acc;
}

} // namespace hetamp
