#pragma once

#include <stdexcept>
#include <string>

namespace harmsep {

// Base for domain failures. Precondition violations on plain arguments
// (negative sizes, mismatched dimensions) throw std::invalid_argument instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or incomplete Hamiltonian spec file.
struct SpecError : Error {
    using Error::Error;
};

// The Hamiltonian does not describe a bounded, harmonic system.
struct InvalidHamiltonian : Error {
    using Error::Error;
};

struct NotPsdError : InvalidHamiltonian {
    NotPsdError(const std::string& what, double min_eig)
        : InvalidHamiltonian(what), min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

// A vanishing normal-mode frequency where a thermal state needs a harmonic mode.
struct ZeroModeError : InvalidHamiltonian {
    ZeroModeError(const std::string& what, double eig)
        : InvalidHamiltonian(what), eigenvalue(eig) {}
    double eigenvalue;
};

// Caller asked for an exactness certificate the Hamiltonian cannot support.
struct SymmetryRefused : Error {
    using Error::Error;
};

// A scalar function is undefined somewhere on a matrix spectrum.
struct SingularSpectrum : Error {
    SingularSpectrum(const std::string& what, double eig)
        : Error(what), eigenvalue(eig) {}
    double eigenvalue;
};

struct NotPositiveDefinite : Error {
    NotPositiveDefinite(const std::string& what, double min_eig)
        : Error(what), min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

}  // namespace harmsep
