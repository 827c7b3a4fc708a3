#include "hetamp/amplifiers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hetamp/errors.hpp"

namespace hetamp {

AmplifierSpec AmplifierSpec::number(int g) {
    if (g < 1) throw ConfigError("number amplifier: gain must be a positive integer "
                                 "(the spectrum must map into itself)");
    return AmplifierSpec{Kind::Number, double(g), 0.0};
}

AmplifierSpec AmplifierSpec::quadrature(double phi, double g) {
    if (!(g >= 1.0)) throw ConfigError("quadrature amplifier: gain must be >= 1");
    return AmplifierSpec{Kind::Quadrature, g, phi};
}

AmplifierSpec AmplifierSpec::k(double g) {
    if (!(g >= 1.0)) throw ConfigError("k amplifier: gain must be >= 1");
    return AmplifierSpec{Kind::K, g, 0.0};
}

std::string AmplifierSpec::observable_name() const {
    switch (kind) {
        case Kind::Number: return "number";
        case Kind::Quadrature: return "quadrature";
        case Kind::K: return "k";
    }
    return {};
}

DensityOperator number_amplify(const DensityOperator& rho, int g, int dim_out) {
    if (g < 1) throw ConfigError("number_amplify: gain must be a positive integer");
    const int dim = rho.dim();
    if (dim_out == 0) dim_out = g * (dim - 1) + 1;
    if (g * (dim - 1) >= dim_out)
        throw TruncationError("number_amplify: output dim cannot hold level g*(dim-1)");
    Matrix out = Matrix::Zero(dim_out, dim_out);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) out(g * m, g * n) = rho.matrix()(m, n);
    return DensityOperator::from_matrix(std::move(out));
}

double preamp_number_weight(int n, int g, double h) {
    if (h < 0) throw ConfigError("preamp_number_weight: h must be nonnegative");
    if (n < 0 || g < 1) throw ConfigError("preamp_number_weight: bad n or g");
    if (h == 0) return n == 0 ? double(g) : 0.0;
    const double gn = double(g) * n;
    return g * std::exp(-g * h + gn * std::log(g * h) - std::lgamma(gn + 1.0));
}

namespace {

// Heterodyne sampler specialized to a number-amplified state: the support
// sits on levels g*n only, so <c|rho'|c> reduces to the original dim x dim
// quadratic form on the subsampled coherent vector.
std::vector<double> sample_amplified_h(const DensityOperator& rho, int g, double delta2,
                                       std::size_t count, std::uint64_t seed) {
    const int dim = rho.dim();
    Eigen::VectorXd d(dim);
    for (int n = 0; n < dim; ++n) d(n) = std::sqrt(std::max(rho.diagonal(n), 0.0));
    const double big_m = d.sum() * d.sum();
    d /= d.sum();

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(d.data(), d.data() + dim);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto coherent_sub = [&](double r2, double theta, Vector& c) {
        // c(n) = <gn|alpha> subsampled at the amplified levels
        const double lr = r2 > 0 ? std::log(r2) : -745.0;
        for (int n = 0; n < dim; ++n) {
            const double gn = double(g) * n;
            c(n) = std::exp(0.5 * (-r2 + gn * lr) - 0.5 * std::lgamma(gn + 1.0)) *
                   std::exp(cd(0, gn * theta));
        }
    };

    auto log_poisson = [&](double r2, double level) {
        const double lr = r2 > 0 ? std::log(r2) : -745.0;
        return -r2 + level * lr - std::lgamma(level + 1.0);
    };

    std::vector<double> out;
    out.reserve(count);
    Vector c(dim);
    std::size_t proposals = 0;
    const std::size_t cap = 400 * count + 10000;
    const double noise_sigma = std::sqrt(delta2 / 2.0);
    while (out.size() < count) {
        if (++proposals > cap)
            throw ResolutionError("preamp sampling: acceptance rate below floor");
        const int n = pick(rng);
        // r^2 ~ Gamma(gn + 1), via sum of exponentials for small gn, else
        // Marsaglia-Tsang
        const double shape = double(g) * n + 1.0;
        std::gamma_distribution<double> gamma(shape, 1.0);
        const double r2 = gamma(rng);
        const double theta = 2.0 * M_PI * unif(rng);
        coherent_sub(r2, theta, c);
        const double q = std::max((c.adjoint() * rho.matrix() * c).value().real(), 0.0);
        double env = 0;
        double mx = -1e300;
        Eigen::VectorXd t(dim);
        for (int k = 0; k < dim; ++k) {
            t(k) = log_poisson(r2, double(g) * k);
            mx = std::max(mx, t(k));
        }
        for (int k = 0; k < dim; ++k)
            if (d(k) > 0) env += d(k) * std::exp(t(k) - mx);
        const double le = std::log(env) + mx + std::log(big_m);
        const double lq = std::log(std::max(q, 1e-300));
        if (lq > le + 1e-9) throw ResolutionError("preamp sampling: envelope violated");
        if (std::log(std::max(unif(rng), 1e-300)) < lq - le) {
            double v = r2;
            if (noise_sigma > 0) {
                const cd a = std::sqrt(r2) * cd(std::cos(theta), std::sin(theta)) +
                             cd(gauss(rng) * noise_sigma, gauss(rng) * noise_sigma);
                v = std::norm(a);
            }
            out.push_back(v / g);
        }
    }
    return out;
}

} // namespace

PreampDensity preamp_number_density(const DensityOperator& rho, int g, Efficiency eta,
                                    const Eigen::VectorXd& h_grid,
                                    std::size_t mc_samples, std::uint64_t seed) {
    if (g < 1) throw ConfigError("preamp_number_density: gain must be a positive integer");
    if (h_grid.size() < 2 || h_grid.minCoeff() < 0)
        throw ConfigError("preamp_number_density: h grid must be nonnegative");

    // resolution guard: the narrowest comb peak has width ~ sqrt(n_min/g)
    int n_min_pos = 0;
    for (int n = 1; n < rho.dim(); ++n)
        if (rho.diagonal(n) > 1e-12) { n_min_pos = n; break; }
    if (n_min_pos > 0) {
        const double width = std::sqrt(double(n_min_pos) / g);
        double max_dx = 0;
        for (int i = 0; i + 1 < h_grid.size(); ++i)
            max_dx = std::max(max_dx, h_grid(i + 1) - h_grid(i));
        if (max_dx > 0.2 * width)
            throw ResolutionError("preamp_number_density: node spacing " +
                                  std::to_string(max_dx) + " too coarse for peak width " +
                                  std::to_string(width));
    }

    PreampDensity out;
    out.gain = g;
    out.observable = "number";
    out.eta = eta.eta;
    out.rescaled = true;
    if (eta.ideal()) {
        const int m = static_cast<int>(h_grid.size());
        out.base.support = h_grid;
        out.base.weights = trapezoid_weights(h_grid);
        out.base.density = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) {
            double acc = 0;
            for (int n = 0; n < rho.dim(); ++n) {
                const double p = rho.diagonal(n);
                if (p > 0) acc += p * preamp_number_weight(n, g, h_grid(i));
            }
            out.base.density(i) = acc;
        }
        return out;
    }
    auto h = sample_amplified_h(rho, g, eta.delta2(), mc_samples, seed);
    const int m = static_cast<int>(h_grid.size());
    out.base.support = h_grid;
    out.base.weights = trapezoid_weights(h_grid);
    out.base.density = Eigen::VectorXd::Zero(m);
    std::size_t inside = 0;
    for (double v : h) {
        auto it = std::lower_bound(h_grid.data(), h_grid.data() + m, v);
        int i = static_cast<int>(it - h_grid.data());
        if (i > 0 && (i == m || v - h_grid(i - 1) < h_grid(i) - v)) --i;
        if (i < 0 || i >= m) continue;
        out.base.density(i) += 1.0;
        ++inside;
    }
    if (inside == 0) throw ResolutionError("preamp_number_density: no mass inside grid");
    for (int i = 0; i < m; ++i) out.base.density(i) /= double(h.size()) * out.base.weights(i);
    out.base.method = "monte-carlo";
    out.base.samples = mc_samples;
    out.base.seed = seed;
    return out;
}

GridWavefunction quadrature_amplifier_apply(const GridWavefunction& psi, double phi,
                                            double g, int n_max) {
    if (!(g >= 1.0)) throw ConfigError("quadrature amplifier: gain must be >= 1");
    const StateVector c = grid_to_fock(psi, n_max);
    Vector rot(c.dim());
    for (int n = 0; n < c.dim(); ++n) rot(n) = c.coeff(n) * std::exp(cd(0, -phi * n));
    // (U psi)(x) = g^{-1/2} psi_rot(x/g) in the phi-rotated representation
    const Eigen::VectorXd scaled = psi.spec.nodes / g;
    const Eigen::MatrixXd h = hermite_functions(n_max, scaled);
    GridWavefunction out;
    out.spec = psi.spec;
    out.values = Vector::Zero(psi.spec.size());
    for (int n = 0; n <= n_max; ++n) out.values += rot(n) * h.row(n).transpose().cast<cd>();
    out.values /= std::sqrt(g);
    const double norm = out.norm();
    if (std::abs(norm - 1.0) > 1e-6)
        throw ResolutionError("quadrature amplifier: norm drift " + std::to_string(norm - 1.0));
    out.values /= norm;
    return out;
}

PreampDensity preamp_quadrature_density(const DensityOperator& rho, double phi, double g,
                                        Efficiency eta, const Eigen::VectorXd& x_grid) {
    if (!(g >= 1.0)) throw ConfigError("preamp_quadrature_density: gain must be >= 1");
    // rescaled outcome u = x/g: the dilation cancels on the state density and
    // the heterodyne kernel variance shrinks to (2-eta)/(4 eta g^2)
    OutcomeDensity bare = rho_quadrature_density(rho, phi, x_grid);
    const double v = (2.0 - eta.eta) / (4.0 * eta.eta * g * g);
    PreampDensity out;
    out.base = gaussian_convolve(bare, v);
    out.gain = g;
    out.observable = "quadrature";
    out.eta = eta.eta;
    out.rescaled = true;
    return out;
}

namespace {

// raw (un-renormalized) K-amplifier map applied to arbitrary grid data
Vector k_map(const GridSpec& s, const Vector& values, double g) {
    const int n = s.size();
    const int pps = s.points_per_side;
    const int patch = s.patch_per_side;
    const int pos0 = pps + 2 * patch; // first positive log node
    const double t0 = std::log(s.log_floor);
    const double dt = s.log_step;

    // value of psi at an arbitrary point y (same sign branch), 4-point
    // Lagrange in t = log|y| on the log side, cubic in y across the patch
    auto interp = [&](double y) -> cd {
        const double ay = std::abs(y);
        if (ay >= s.half_width) return 0.0;
        if (ay >= s.log_floor) {
            // 6-point Lagrange in t: the pullback oscillates for displaced
            // states, and cubic order is not enough at gain 8
            const double t = std::log(ay);
            int i = static_cast<int>(std::floor((t - t0) / dt)) - 2;
            i = std::clamp(i, 0, pps - 6);
            double tt[6];
            cd vv[6];
            for (int k = 0; k < 6; ++k) {
                tt[k] = t0 + (i + k) * dt;
                const int idx = y > 0 ? pos0 + i + k : pps - 1 - (i + k);
                vv[k] = values(idx);
            }
            cd acc = 0;
            for (int k = 0; k < 6; ++k) {
                double w = 1;
                for (int j = 0; j < 6; ++j)
                    if (j != k) w *= (t - tt[j]) / (tt[k] - tt[j]);
                acc += w * vv[k];
            }
            return acc;
        }
        // |y| below the log floor: cubic through the four nearest patch nodes
        auto lo = std::lower_bound(s.nodes.data(), s.nodes.data() + n, y);
        int i = static_cast<int>(lo - s.nodes.data()) - 2;
        i = std::clamp(i, 0, n - 4);
        cd acc = 0;
        for (int k = 0; k < 4; ++k) {
            double w = 1;
            for (int j = 0; j < 4; ++j)
                if (j != k) w *= (y - s.nodes(i + j)) / (s.nodes(i + k) - s.nodes(i + j));
            acc += w * values(i + k);
        }
        return acc;
    };

    Vector out(n);
    const double half_log_g = 0.5 * std::log(g);
    for (int i = 0; i < n; ++i) {
        const double x = s.nodes(i);
        const double ax = std::abs(x);
        const double y = x_star_power(x, g);
        // prefactor sqrt(g) |x|^{(g-1)/2} in log-domain
        const double lpre = half_log_g + 0.5 * (g - 1.0) * std::log(ax);
        const cd v = interp(y);
        out(i) = (v == cd(0.0) || lpre < -700.0) ? cd(0.0) : std::exp(lpre) * v;
    }
    return out;
}

} // namespace

GridWavefunction k_amplifier_apply(const GridWavefunction& psi, double g, double* drift) {
    if (!(g >= 1.0)) throw ConfigError("k amplifier: gain must be >= 1");
    GridWavefunction out;
    out.spec = psi.spec;
    out.values = k_map(psi.spec, psi.values, g);
    const double norm = out.norm();
    if (drift) *drift = std::abs(norm - 1.0);
    if (std::abs(norm - 1.0) > 1e-4)
        throw ResolutionError("k amplifier: norm drift " + std::to_string(norm - 1.0) +
                              " at gain " + std::to_string(g));
    out.values /= norm;
    return out;
}

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double gauss_moment(int m, double variance) {
    if (m % 2) return 0.0;
    double v = 1.0;
    for (int j = 1; j < m; j += 2) v *= j; // (m-1)!!
    return v * std::pow(variance, m / 2);
}

bool is_abs2(const PhaseSpacePolynomial& f) {
    const auto& t = f.terms();
    return t.size() == 1 && t.count({1, 1}) == 1 && std::abs(t.at({1, 1}) - cd(1.0)) < 1e-12;
}

bool is_re_alpha(const PhaseSpacePolynomial& f, double phi) {
    const auto& t = f.terms();
    if (t.size() != 2 || !t.count({1, 0}) || !t.count({0, 1})) return false;
    return std::abs(t.at({1, 0}) - 0.5 * std::exp(cd(0, -phi))) < 1e-12 &&
           std::abs(t.at({0, 1}) - 0.5 * std::exp(cd(0, phi))) < 1e-12;
}

// f = Im(alpha^2) + (c/2)|alpha|^2 -> recover c, or nullopt-style failure
bool match_k_family(const PhaseSpacePolynomial& f, double& c) {
    const auto& t = f.terms();
    for (const auto& [key, coeff] : t) {
        if (key == PhaseSpacePolynomial::Key{2, 0}) {
            if (std::abs(coeff - cd(0, -0.5)) > 1e-12) return false;
        } else if (key == PhaseSpacePolynomial::Key{0, 2}) {
            if (std::abs(coeff - cd(0, 0.5)) > 1e-12) return false;
        } else if (key == PhaseSpacePolynomial::Key{1, 1}) {
            if (std::abs(coeff.imag()) > 1e-12) return false;
            c = 2.0 * coeff.real();
        } else {
            return false;
        }
    }
    return t.count({2, 0}) == 1 && t.count({0, 2}) == 1;
}

} // namespace

double preamp_moment(const AmplifierSpec& spec, const PhaseSpacePolynomial& f, int l,
                     const DensityOperator& state, Efficiency eta) {
    if (l < 0) throw ConfigError("preamp_moment: l must be nonnegative");
    if (l == 0) return 1.0;
    const double g = spec.gain;
    const double delta2 = eta.delta2();

    if (spec.kind == AmplifierSpec::Kind::Number) {
        if (!is_abs2(f))
            throw ConfigError("preamp_moment: the number amplifier supports f = |alpha|^2");
        const int gi = static_cast<int>(std::lround(g));
        // g^{-l} <amp| Gamma[:f^l:_A] |amp> with the amplified state diagonal
        // on levels g*n: sum_r C(l,r)^2 r! Delta^{2r} (gn+l-r)!/(gn)!
        double acc = 0;
        for (int n = 0; n < state.dim(); ++n) {
            const double p = state.diagonal(n);
            if (p <= 0) continue;
            const double gn = double(gi) * n;
            double inner = 0;
            double rfact = 1.0;
            for (int r = 0; r <= l; ++r) {
                if (r > 0) rfact *= r;
                const double b = binom(l, r);
                inner += b * b * rfact * std::pow(delta2, r) *
                         std::exp(std::lgamma(gn + l - r + 1.0) - std::lgamma(gn + 1.0));
            }
            acc += p * inner;
        }
        return acc / std::pow(g, l);
    }

    if (spec.kind == AmplifierSpec::Kind::Quadrature) {
        if (!is_re_alpha(f, spec.phi))
            throw ConfigError("preamp_moment: the quadrature amplifier supports "
                              "f = Re(alpha e^{-i phi}) at the spec's phi");
        // rescaled outcome = X_phi + Gaussian((2-eta)/(4 eta g^2))
        const double v = (2.0 - eta.eta) / (4.0 * eta.eta * g * g);
        const FockOperator x = quadrature_operator(spec.phi, state.dim());
        Matrix p = Matrix::Identity(state.dim(), state.dim());
        double acc = 0;
        for (int k = 0; k <= l; ++k) {
            const double xk = (state.matrix() * p).trace().real();
            acc += binom(l, k) * xk * gauss_moment(l - k, v);
            p = p * x.matrix;
        }
        return acc;
    }

    throw ConfigError("preamp_moment: the K amplifier needs a grid-represented state");
}

double preamp_moment(const AmplifierSpec& spec, const PhaseSpacePolynomial& f, int l,
                     const GridWavefunction& state, Efficiency eta) {
    if (spec.kind != AmplifierSpec::Kind::K)
        throw ConfigError("preamp_moment: grid route is for the K amplifier");
    if (l < 0) throw ConfigError("preamp_moment: l must be nonnegative");
    if (l == 0) return 1.0;
    double c = 0;
    if (!match_k_family(f, c))
        throw ConfigError("preamp_moment: the K amplifier supports "
                          "f = Im(alpha^2) + (c/2)|alpha|^2");
    if (l > 2)
        throw ConfigError("preamp_moment: K amplifier moments implemented for l <= 2");
    if (!eta.ideal() && l == 2)
        throw ConfigError("preamp_moment: K amplifier second moment requires eta = 1");
    const double g = spec.gain;
    const GridSpec& s = state.spec;
    const auto& w = s.weights;
    auto winner = [&](const Vector& u, const Vector& v) {
        return (u.conjugate().array() * w.cast<cd>().array() * v.array()).sum();
    };

    // K on the amplified state is evaluated by commuting it through the
    // amplifier: K U_g = g U_g K pointwise, so K is differenced on the
    // smooth input instead of the oscillatory amplified function.
    const Vector k_base = apply_k(state);
    Vector amp = state.values, amp_k = k_base;
    if (g != 1.0) {
        amp = k_map(s, state.values, g);
        amp_k = k_map(s, k_base, g);
        const double norm = std::sqrt(winner(amp, amp).real());
        if (std::abs(norm - 1.0) > 1e-4)
            throw ResolutionError("k amplifier: norm drift " + std::to_string(norm - 1.0) +
                                  " at gain " + std::to_string(g));
        amp /= norm;
        amp_k /= norm;
    }
    const GridWavefunction amp_wf{s, amp};
    const Vector apsi = apply_annihilation(amp_wf);

    // anti-normal identities for the quadratic family:
    //   :f:_A   = K + (c/2)(N + 1)
    //   :f^2:_A = K^2 + N + 1/2 + c({N,K}/2 + 2K) + (c^2/4)(N+1)(N+2)
    const double k1 = g * winner(amp, amp_k).real();     // <K>_amp
    const double nn = winner(apsi, apsi).real();         // <N>_amp
    if (l == 1) {
        double m = k1 + (c / 2.0) * (nn + 1.0);
        if (!eta.ideal()) m += (c / 2.0) * eta.delta2(); // Gamma[|alpha|^2] adds Delta^2
        return m / g;
    }
    const double k2 = g * g * winner(amp_k, amp_k).real(); // <K^2>_amp
    // <{N,K}> = 2 Re <a psi | a K psi> with K psi = g * U (K state)
    const GridWavefunction kw{s, amp_k};
    const Vector akpsi = apply_annihilation(kw);
    const double nk = 2.0 * g * winner(apsi, akpsi).real();
    // <N^2> = <a psi|(N+1)|a psi> = ||a a psi||^2 + ||a psi||^2
    const GridWavefunction aw{s, apsi};
    const Vector aapsi = apply_annihilation(aw);
    const double n2 = winner(aapsi, aapsi).real() + nn;
    const double m2 = k2 + nn + 0.5 + c * (0.5 * nk + 2.0 * k1) +
                      (c * c / 4.0) * (n2 + 3.0 * nn + 2.0);
    return m2 / (g * g);
}

} // namespace hetamp
