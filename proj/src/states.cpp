#include "hetamp/states.hpp"

#include <cmath>
#include <sstream>

#include "hetamp/errors.hpp"
#include "hetamp/io.hpp"

namespace hetamp {

TestState TestState::vacuum() { return TestState{Kind::Vacuum, 0, 0.0, 0.0}; }

TestState TestState::fock(int n) {
    if (n < 0) throw ConfigError("fock state: n must be nonnegative");
    return TestState{Kind::Fock, n, 0.0, 0.0};
}

TestState TestState::coherent(cd beta) { return TestState{Kind::Coherent, 0, beta, 0.0}; }

TestState TestState::coherent_nbar(double nbar) {
    if (nbar < 0) throw ConfigError("coherent_nbar: mean must be nonnegative");
    return coherent(std::sqrt(nbar));
}

TestState TestState::squeezed(double r) { return TestState{Kind::Squeezed, 0, 0.0, r}; }

TestState TestState::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto need = [&](const char* what) {
        if (tail.empty()) throw ConfigError(std::string("state '") + head + "' needs " + what);
    };
    if (head == "vacuum") return vacuum();
    if (head == "fock") {
        need("a level, e.g. fock:3");
        return fock(std::stoi(tail));
    }
    if (head == "coherent") {
        need("an amplitude, e.g. coherent:1.5 or coherent:1,0.5");
        const auto comma = tail.find(',');
        const double re = std::stod(tail.substr(0, comma));
        const double im = comma == std::string::npos ? 0.0 : std::stod(tail.substr(comma + 1));
        return coherent(cd(re, im));
    }
    if (head == "coherent-nbar") {
        need("a mean photon number, e.g. coherent-nbar:12");
        return coherent_nbar(std::stod(tail));
    }
    if (head == "squeezed") {
        need("a squeezing parameter, e.g. squeezed:0.5");
        return squeezed(std::stod(tail));
    }
    throw ConfigError("unknown state '" + text +
                      "'; expected vacuum, fock:N, coherent:RE[,IM], coherent-nbar:N, squeezed:R");
}

std::string TestState::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Vacuum: os << "vacuum"; break;
        case Kind::Fock: os << "fock:" << n; break;
        case Kind::Coherent:
            os << "coherent:" << format_double(beta.real());
            if (beta.imag() != 0) os << "," << format_double(beta.imag());
            break;
        case Kind::Squeezed: os << "squeezed:" << format_double(r); break;
    }
    return os.str();
}

StateVector TestState::pure(int dim) const {
    if (dim < 1) throw ConfigError("state: dim must be >= 1");
    Vector c = Vector::Zero(dim);
    switch (kind) {
        case Kind::Vacuum:
            c(0) = 1.0;
            break;
        case Kind::Fock:
            if (n >= dim) throw TruncationError("fock state level exceeds dim");
            c(n) = 1.0;
            break;
        case Kind::Coherent:
            return coherent_state(beta, dim).state;
        case Kind::Squeezed: {
            // squeezing along the measured quadrature: even levels only
            const double t = std::tanh(r);
            double tail = 1.0;
            for (int k = 0; 2 * k < dim; ++k) {
                const double lm = 0.5 * std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0) -
                                  k * std::log(2.0) + k * std::log(std::max(std::abs(t), 1e-300));
                double v = std::exp(lm - 0.5 * std::log(std::cosh(r)));
                if (t < 0 ? (k % 2 == 0) : (k % 2 == 1)) v = -v; // (-tanh r)^k
                if (t == 0.0) v = k == 0 ? 1.0 : 0.0;
                c(2 * k) = v;
                tail -= v * v;
            }
            if (tail > 1e-8) throw TruncationError("squeezed state: dim too small for r");
            break;
        }
    }
    return StateVector(c);
}

DensityOperator TestState::density(int dim) const { return DensityOperator::pure(pure(dim)); }

GridWavefunction TestState::grid(const GridSpec& spec) const {
    GridWavefunction psi;
    psi.spec = spec;
    const auto& x = spec.nodes;
    const int m = static_cast<int>(x.size());
    psi.values.resize(m);
    const double c0 = std::pow(2.0 / M_PI, 0.25);
    switch (kind) {
        case Kind::Vacuum:
            for (int i = 0; i < m; ++i) psi.values(i) = c0 * std::exp(-x(i) * x(i));
            break;
        case Kind::Fock: {
            const Eigen::MatrixXd h = hermite_functions(n, x);
            psi.values = h.row(n).transpose().cast<cd>();
            break;
        }
        case Kind::Coherent: {
            // eigenstate of a = x + d/dx / 2: psi propto exp(-(x - Re b)^2 + 2i Im b x)
            const double b1 = beta.real(), b2 = beta.imag();
            for (int i = 0; i < m; ++i)
                psi.values(i) =
                    c0 * std::exp(-(x(i) - b1) * (x(i) - b1)) * std::exp(cd(0, 2.0 * b2 * x(i)));
            break;
        }
        case Kind::Squeezed: {
            const double e2r = std::exp(2.0 * r);
            const double amp = c0 * std::exp(0.5 * r);
            for (int i = 0; i < m; ++i) psi.values(i) = amp * std::exp(-e2r * x(i) * x(i));
            break;
        }
    }
    return psi;
}

} // namespace hetamp
