#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace prepot {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the open domain of the model coordinate.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested level N is not a bound state of the model.
class LevelError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::vector<std::string> diagnostics)
        : Error(what), diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

/// Two roots coincide, so a pair term 1/(z_k - z_l) is undefined.
class SingularConfiguration : public Error {
public:
    using Error::Error;
};

/// Evaluation at the preimage of a root, where ln|z - z_k| diverges.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Sampled wavefunction does not decay inside the grid.
class BoundaryLeak : public Error {
public:
    using Error::Error;
};

/// Root finder or recurrence broke down.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Finite-difference spectrum does not contain the expected bound levels.
class MismatchError : public Error {
public:
    using Error::Error;
};

} // namespace prepot
