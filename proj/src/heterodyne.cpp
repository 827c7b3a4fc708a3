#include "hetamp/heterodyne.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hetamp/errors.hpp"
#include "hetamp/grid.hpp"

namespace hetamp {

Efficiency::Efficiency(double e) : eta(e) {
    if (!(e > 0.0) || e > 1.0) throw ConfigError("Efficiency must lie in (0, 1]");
}

namespace {

// log <n|alpha> magnitude-and-phase pieces, log-domain
cd coherent_overlap(int n, cd alpha) {
    const double r2 = std::norm(alpha);
    if (r2 == 0.0) return n == 0 ? 1.0 : 0.0;
    const double lm = -0.5 * r2 + n * std::log(std::abs(alpha)) - 0.5 * std::lgamma(n + 1.0);
    return std::exp(lm) * std::exp(cd(0, n * std::arg(alpha)));
}

// quadratic form without the truncation guard; for |alpha| beyond the
// retained levels this is the Q of the truncated state, which is what the
// rejection sampler needs
double q_raw(const DensityOperator& rho, cd alpha) {
    const int dim = rho.dim();
    Vector c(dim);
    for (int n = 0; n < dim; ++n) c(n) = coherent_overlap(n, alpha);
    const double v = (c.adjoint() * rho.matrix() * c).value().real() / M_PI;
    return std::max(v, 0.0);
}

} // namespace

double q_function(const DensityOperator& rho, cd alpha) {
    // tail check: the |alpha|-ball must be representable in dim levels
    const double r2 = std::norm(alpha);
    if (r2 > 0 && rho.dim() < r2 + 8.0 * std::sqrt(r2) + 8.0)
        throw TruncationError("q_function: |alpha| too large for dim");
    return q_raw(rho, alpha);
}

ComplexOutcomeSample heterodyne_sample(const DensityOperator& rho, std::size_t count,
                                       Efficiency eta, std::uint64_t seed) {
    if (count < 1) throw ConfigError("heterodyne_sample: count must be >= 1");
    const int dim = rho.dim();

    // Envelope: Q(alpha) <= M * sum_n d_n Q_{|n>}(alpha) with d_n prop to
    // sqrt(rho_nn), M = (sum_n sqrt(rho_nn))^2 (Cauchy-Schwarz on the PSD
    // matrix).  Proposal: n ~ d, r^2 ~ Gamma(n+1), phase uniform.
    Eigen::VectorXd d(dim);
    for (int n = 0; n < dim; ++n) d(n) = std::sqrt(std::max(rho.diagonal(n), 0.0));
    const double dsum = d.sum();
    if (dsum <= 0) throw ConfigError("heterodyne_sample: empty Fock diagonal");
    const double big_m = dsum * dsum;
    d /= dsum;

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(d.data(), d.data() + dim);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto log_envelope = [&](cd alpha) {
        const double r2 = std::norm(alpha);
        const double lr = r2 > 0 ? std::log(r2) : -745.0;
        double mx = -1e300;
        Eigen::VectorXd t(dim);
        for (int n = 0; n < dim; ++n) {
            t(n) = -r2 + n * lr - std::lgamma(n + 1.0) - std::log(M_PI);
            mx = std::max(mx, t(n));
        }
        double acc = 0;
        for (int n = 0; n < dim; ++n)
            if (d(n) > 0) acc += d(n) * std::exp(t(n) - mx);
        return std::log(acc) + mx;
    };

    const double noise_sigma = std::sqrt(eta.delta2() / 2.0); // per real component
    ComplexOutcomeSample out;
    out.values.reserve(count);
    out.eta = eta.eta;
    out.seed = seed;

    std::size_t proposals = 0;
    const std::size_t proposal_cap = 400 * count + 10000; // ~0.25% acceptance floor
    while (out.values.size() < count) {
        if (++proposals > proposal_cap)
            throw ResolutionError("heterodyne_sample: acceptance rate below floor; "
                                  "envelope unsuitable for this state");
        const int n = pick(rng);
        double r2 = 0;
        for (int k = 0; k <= n; ++k) r2 -= std::log(1.0 - unif(rng)); // Gamma(n+1)
        const double th = 2.0 * M_PI * unif(rng);
        const cd alpha = std::sqrt(r2) * cd(std::cos(th), std::sin(th));
        const double lq = std::log(std::max(q_raw(rho, alpha), 1e-300));
        const double le = log_envelope(alpha) + std::log(big_m);
        if (lq > le + 1e-9)
            throw ResolutionError("heterodyne_sample: envelope violated at |alpha| = " +
                                  std::to_string(std::abs(alpha)));
        if (std::log(std::max(unif(rng), 1e-300)) < lq - le) {
            cd v = alpha;
            if (noise_sigma > 0) v += cd(gauss(rng) * noise_sigma, gauss(rng) * noise_sigma);
            out.values.push_back(v);
        }
    }
    return out;
}

namespace {

// bin samples of a scalar outcome onto grid cells centered at the grid nodes
OutcomeDensity bin_samples(const std::vector<double>& w, const Eigen::VectorXd& grid,
                           std::uint64_t samples, std::uint64_t seed) {
    const int n = static_cast<int>(grid.size());
    OutcomeDensity out;
    out.support = grid;
    out.weights = trapezoid_weights(grid);
    out.density = Eigen::VectorXd::Zero(n);
    std::size_t inside = 0;
    for (double v : w) {
        // nearest cell by midpoint edges
        auto it = std::lower_bound(grid.data(), grid.data() + n, v);
        int i = static_cast<int>(it - grid.data());
        if (i > 0 && (i == n || v - grid(i - 1) < grid(i) - v)) --i;
        if (i < 0 || i >= n) continue;
        out.density(i) += 1.0;
        ++inside;
    }
    if (inside == 0) throw ResolutionError("sample binning: no mass inside grid");
    for (int i = 0; i < n; ++i) out.density(i) /= double(w.size()) * out.weights(i);
    out.method = "monte-carlo";
    out.samples = samples;
    out.seed = seed;
    return out;
}

} // namespace

OutcomeDensity number_marginal_density(const DensityOperator& rho, Efficiency eta,
                                       const Eigen::VectorXd& h_grid,
                                       std::size_t mc_samples, std::uint64_t seed) {
    if (h_grid.minCoeff() < 0)
        throw ConfigError("number_marginal_density: h grid must be nonnegative");
    if (eta.ideal()) {
        const int n = static_cast<int>(h_grid.size());
        OutcomeDensity out;
        out.support = h_grid;
        out.weights = trapezoid_weights(h_grid);
        out.density = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            const double h = h_grid(i);
            const double lh = h > 0 ? std::log(h) : -745.0;
            double acc = 0;
            for (int k = 0; k < rho.dim(); ++k) {
                const double p = rho.diagonal(k);
                if (p <= 0) continue;
                acc += p * std::exp(-h + k * lh - std::lgamma(k + 1.0));
            }
            out.density(i) = acc;
        }
        return out;
    }
    // smeared closed form unavailable; Monte Carlo on |alpha|^2
    auto s = heterodyne_sample(rho, mc_samples, eta, seed);
    std::vector<double> w(s.values.size());
    std::transform(s.values.begin(), s.values.end(), w.begin(),
                   [](cd a) { return std::norm(a); });
    return bin_samples(w, h_grid, mc_samples, seed);
}

OutcomeDensity rho_quadrature_density(const DensityOperator& rho, double phi,
                                      const Eigen::VectorXd& x_grid) {
    const int dim = rho.dim();
    const Eigen::MatrixXd h = hermite_functions(dim - 1, x_grid);
    // p(x) = sum_{mn} h_m h_n e^{-i phi m} rho_mn e^{i phi n}
    Matrix rot = rho.matrix();
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) rot(m, n) *= std::exp(cd(0, phi * (n - m)));
    const Matrix hc = h.cast<cd>();
    OutcomeDensity out;
    out.support = x_grid;
    out.weights = trapezoid_weights(x_grid);
    out.density = (hc.adjoint() * rot.transpose() * hc).diagonal().real().cwiseMax(0.0);
    // ^ p(x_j) = sum_{mn} h_m(x_j) rot_{mn} h_n(x_j)
    return out;
}

OutcomeDensity quadrature_marginal_density(const DensityOperator& rho, double phi,
                                           Efficiency eta, const Eigen::VectorXd& x_grid) {
    OutcomeDensity bare = rho_quadrature_density(rho, phi, x_grid);
    const double v = (2.0 - eta.eta) / (4.0 * eta.eta);
    return gaussian_convolve(bare, v);
}

OutcomeDensity generic_marginal_density(const DensityOperator& rho,
                                        const PhaseSpacePolynomial& f, Efficiency eta,
                                        int bins, MarginalMethod method,
                                        std::size_t samples, std::uint64_t seed) {
    if (!f.is_real()) throw ConfigError("generic_marginal_density: f must be real-valued");
    if (bins < 2) bins = 2;

    if (method == MarginalMethod::Quadrature2d && !eta.ideal())
        throw ConfigError("generic_marginal_density: quadrature2d supports eta = 1 only");

    std::vector<double> w;
    if (method == MarginalMethod::MonteCarlo) {
        auto s = heterodyne_sample(rho, samples, eta, seed);
        w.resize(s.values.size());
        std::transform(s.values.begin(), s.values.end(), w.begin(),
                       [&](cd a) { return f.evaluate_real(a); });
    } else {
        // polar quadrature over the alpha plane, accumulated into bins below
        w.clear();
    }

    if (method == MarginalMethod::MonteCarlo) {
        // Freedman-Diaconis bin width with a hard cap
        std::vector<double> sorted = w;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        const double q1 = sorted[n / 4], q3 = sorted[(3 * n) / 4];
        const double lo = sorted[static_cast<std::size_t>(0.00005 * n)];
        const double hi = sorted[n - 1 - static_cast<std::size_t>(0.00005 * n)];
        double width = 2.0 * (q3 - q1) / std::cbrt(double(n));
        if (width <= 0) width = (hi - lo) / bins;
        int nb = std::clamp(int(std::ceil((hi - lo) / std::max(width, 1e-300))), bins, 4096);
        Eigen::VectorXd grid(nb);
        const double h = (hi - lo) / (nb - 1);
        for (int i = 0; i < nb; ++i) grid(i) = lo + i * h;
        auto out = bin_samples(w, grid, samples, seed);
        const double inside = out.mass();
        if (inside < 1.0 - 1e-4)
            throw ResolutionError("generic_marginal_density: bin range covers only " +
                                  std::to_string(inside) + " of the mass");
        return out;
    }

    // quadrature2d: Gauss-style polar grid, radius by substitution r^2 = s
    const double nbar = rho.mean_photon_number();
    const double delta2 = eta.delta2();
    const double smax = (std::sqrt(nbar + 1.0 + delta2) + 7.0) *
                        (std::sqrt(nbar + 1.0 + delta2) + 7.0);
    const int nr = 400, nth = 256;
    std::vector<double> values, masses;
    values.reserve(nr * nth);
    masses.reserve(nr * nth);
    const double ds = smax / nr, dth = 2.0 * M_PI / nth;
    for (int i = 0; i < nr; ++i) {
        const double s = (i + 0.5) * ds;
        const double r = std::sqrt(s);
        for (int j = 0; j < nth; ++j) {
            const double th = (j + 0.5) * dth;
            const cd alpha(r * std::cos(th), r * std::sin(th));
            values.push_back(f.evaluate_real(alpha));
            // d^2alpha = r dr dth = ds dth / 2
            masses.push_back(q_raw(rho, alpha) * 0.5 * ds * dth);
        }
    }
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi <= lo) hi = lo + 1.0;
    const int nb = std::min(bins <= 2 ? 256 : bins, 4096);
    Eigen::VectorXd grid(nb);
    const double h = (hi - lo) / (nb - 1);
    for (int i = 0; i < nb; ++i) grid(i) = lo + i * h;
    OutcomeDensity out;
    out.support = grid;
    out.weights = trapezoid_weights(grid);
    out.density = Eigen::VectorXd::Zero(nb);
    for (std::size_t k = 0; k < values.size(); ++k) {
        int i = int(std::lround((values[k] - lo) / h));
        i = std::clamp(i, 0, nb - 1);
        out.density(i) += masses[k];
    }
    for (int i = 0; i < nb; ++i) out.density(i) /= out.weights(i);
    out.method = "quadrature2d";
    return out;
}

double heterodyne_moment(const PhaseSpacePolynomial& f, int l, const DensityOperator& rho,
                         Efficiency eta) {
    if (l < 0) throw ConfigError("heterodyne_moment: l must be nonnegative");
    if (l == 0) return 1.0;
    const PhaseSpacePolynomial fl = f.pow(l).gamma_smear(eta.delta2());
    const FockOperator op = anti_normal_operator(fl, rho.dim());
    return expectation(op, rho).real();
}

} // namespace hetamp
