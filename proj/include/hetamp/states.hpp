#pragma once

#include <string>

#include "hetamp/fock.hpp"
#include "hetamp/grid.hpp"

namespace hetamp {

/// Test-state descriptor shared by the verification module and the CLI.
/// All four kinds are pure and carry both a Fock and a closed-form grid
/// representation.
struct TestState {
    enum class Kind { Vacuum, Fock, Coherent, Squeezed };

    Kind kind = Kind::Vacuum;
    int n = 0;      // Fock
    cd beta = 0.0;  // Coherent
    double r = 0.0; // Squeezed: psi(x) = (2/pi)^{1/4} e^{r/2} exp(-e^{2r} x^2)

    static TestState vacuum();
    static TestState fock(int n);
    static TestState coherent(cd beta);
    static TestState coherent_nbar(double nbar); // beta = sqrt(nbar)
    static TestState squeezed(double r);

    /// Parses "vacuum", "fock:N", "coherent:RE[,IM]", "coherent-nbar:N",
    /// "squeezed:R".
    static TestState parse(const std::string& descriptor);

    std::string name() const;
    StateVector pure(int dim) const;
    DensityOperator density(int dim) const;
    GridWavefunction grid(const GridSpec& spec) const;
};

} // namespace hetamp
