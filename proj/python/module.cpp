#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "hetamp/amplifiers.hpp"
#include "hetamp/errors.hpp"
#include "hetamp/heterodyne.hpp"
#include "hetamp/states.hpp"
#include "hetamp/verification.hpp"

namespace py = pybind11;
using namespace hetamp;

namespace {

PhaseSpacePolynomial make_f(const std::string& name, double phi, double c) {
    if (name == "abs2") return PhaseSpacePolynomial::abs2();
    if (name == "re_alpha") return PhaseSpacePolynomial::re_alpha(phi);
    if (name == "im_alpha2") return PhaseSpacePolynomial::im_alpha2();
    if (name == "k_family") return PhaseSpacePolynomial::k_family(c);
    throw ConfigError("unknown observable: " + name);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

py::dict density_dict(const OutcomeDensity& d) {
    py::dict out;
    std::vector<double> u(d.support.data(), d.support.data() + d.support.size());
    std::vector<double> p(d.density.data(), d.density.data() + d.density.size());
    std::vector<double> w(d.weights.data(), d.weights.data() + d.weights.size());
    out["support"] = u;
    out["density"] = p;
    out["weights"] = w;
    out["mass"] = d.mass();
    out["mean"] = d.mean();
    out["variance"] = d.variance();
    out["method"] = d.method;
    return out;
}

} // namespace

PYBIND11_MODULE(pyhetamp, m) {
    m.doc() = "Heterodyne POVM marginals, ideal observable amplifiers, and the "
              "moment-condition diagnostics";

    m.def(
        "q_function",
        [](const std::string& state, std::complex<double> alpha, int dim) {
            return q_function(TestState::parse(state).density(dim), alpha);
        },
        py::arg("state"), py::arg("alpha"), py::arg("dim") = 64);

    m.def(
        "heterodyne_sample",
        [](const std::string& state, std::size_t count, double eta, std::uint64_t seed,
           int dim) {
            auto s = heterodyne_sample(TestState::parse(state).density(dim), count,
                                       Efficiency(eta), seed);
            return s.values;
        },
        py::arg("state"), py::arg("count"), py::arg("eta") = 1.0, py::arg("seed") = 0,
        py::arg("dim") = 64);

    m.def(
        "heterodyne_moment",
        [](const std::string& state, const std::string& f, int l, double eta, double phi,
           double c, int dim) {
            return heterodyne_moment(make_f(f, phi, c), l,
                                     TestState::parse(state).density(dim),
                                     Efficiency(eta));
        },
        py::arg("state"), py::arg("f"), py::arg("l"), py::arg("eta") = 1.0,
        py::arg("phi") = 0.0, py::arg("c") = 0.0, py::arg("dim") = 64);

    m.def(
        "number_marginal_density",
        [](const std::string& state, const std::vector<double>& h_grid, double eta,
           int dim, std::size_t mc_samples, std::uint64_t seed) {
            return density_dict(number_marginal_density(
                TestState::parse(state).density(dim), Efficiency(eta), to_vector(h_grid),
                mc_samples, seed));
        },
        py::arg("state"), py::arg("h_grid"), py::arg("eta") = 1.0, py::arg("dim") = 64,
        py::arg("mc_samples") = 200000, py::arg("seed") = 0);

    m.def(
        "quadrature_marginal_density",
        [](const std::string& state, const std::vector<double>& x_grid, double phi,
           double eta, int dim) {
            return density_dict(quadrature_marginal_density(
                TestState::parse(state).density(dim), phi, Efficiency(eta),
                to_vector(x_grid)));
        },
        py::arg("state"), py::arg("x_grid"), py::arg("phi") = 0.0, py::arg("eta") = 1.0,
        py::arg("dim") = 64);

    m.def(
        "preamp_number_density",
        [](const std::string& state, int gain, const std::vector<double>& h_grid,
           double eta, int dim) {
            auto p = preamp_number_density(TestState::parse(state).density(dim), gain,
                                           Efficiency(eta), to_vector(h_grid));
            return density_dict(p.base);
        },
        py::arg("state"), py::arg("gain"), py::arg("h_grid"), py::arg("eta") = 1.0,
        py::arg("dim") = 64);

    m.def(
        "preamp_moment",
        [](const std::string& observable, const std::string& state, double gain, int l,
           const std::string& f, double eta, double phi, double c, int dim) {
            auto poly = make_f(f, phi, c);
            auto st = TestState::parse(state);
            if (observable == "number")
                return preamp_moment(AmplifierSpec::number(int(gain)), poly, l,
                                     st.density(dim), Efficiency(eta));
            if (observable == "quadrature")
                return preamp_moment(AmplifierSpec::quadrature(phi, gain), poly, l,
                                     st.density(dim), Efficiency(eta));
            if (observable == "k")
                return preamp_moment(AmplifierSpec::k(gain), poly, l,
                                     st.grid(make_grid()), Efficiency(eta));
            throw ConfigError("unknown amplifier: " + observable);
        },
        py::arg("observable"), py::arg("state"), py::arg("gain"), py::arg("l"),
        py::arg("f"), py::arg("eta") = 1.0, py::arg("phi") = 0.0, py::arg("c") = 0.0,
        py::arg("dim") = 64);

    m.def(
        "moment_report",
        [](const std::string& observable, const std::vector<double>& gains,
           const std::vector<std::string>& states, double eta, double phi, double c) {
            AmplifierSpec::Kind kind;
            PhaseSpacePolynomial f;
            if (observable == "number") {
                kind = AmplifierSpec::Kind::Number;
                f = PhaseSpacePolynomial::abs2();
            } else if (observable == "quadrature") {
                kind = AmplifierSpec::Kind::Quadrature;
                f = PhaseSpacePolynomial::re_alpha(phi);
            } else if (observable == "k") {
                kind = AmplifierSpec::Kind::K;
                f = PhaseSpacePolynomial::k_family(c);
            } else {
                throw ConfigError("unknown observable: " + observable);
            }
            std::vector<TestState> ts;
            for (const auto& s : states) ts.push_back(TestState::parse(s));
            return moment_condition_report(kind, gains, f, ts, Efficiency(eta)).to_json();
        },
        py::arg("observable"), py::arg("gains"), py::arg("states"), py::arg("eta") = 1.0,
        py::arg("phi") = 0.0, py::arg("c") = 0.0);

    m.def(
        "counterexample_report",
        [](double c, const std::vector<std::string>& states,
           const std::vector<double>& gains) {
            std::vector<TestState> ts;
            for (const auto& s : states) ts.push_back(TestState::parse(s));
            return k_counterexample_report(c, ts, gains).to_json();
        },
        py::arg("c") = 0.0,
        py::arg("states") =
            std::vector<std::string>{"coherent:0.70710678118654752,0.70710678118654752",
                                     "coherent:1.4142135623730951,1.4142135623730951"},
        py::arg("gains") = std::vector<double>{2, 4, 8});

    m.def(
        "bch_coefficients",
        [](std::complex<double> a_plus, std::complex<double> a_minus,
           std::complex<double> a_3) {
            auto out = bch_coefficients({a_plus, a_minus, a_3});
            py::dict d;
            d["B_plus"] = out.B_plus;
            d["B_minus"] = out.B_minus;
            d["B_3"] = out.B_3;
            d["Gamma"] = out.Gamma;
            d["residual"] = bch_matrix_check({a_plus, a_minus, a_3}, out);
            return d;
        },
        py::arg("a_plus"), py::arg("a_minus"), py::arg("a_3"));

    m.def(
        "stirling_first_kind",
        [](int l_max) { return stirling_first_kind(l_max).rows; }, py::arg("l_max"));

    py::register_exception<ConfigError>(m, "HetampConfigError");
    py::register_exception<TruncationError>(m, "HetampTruncationError");
    py::register_exception<ResolutionError>(m, "HetampResolutionError");
}
