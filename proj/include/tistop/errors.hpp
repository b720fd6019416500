#pragma once

#include <stdexcept>
#include <string>

namespace tistop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class OpenPieceError : public Error {
public:
    using Error::Error;
};

class InadmissibleRegion : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NotBoundaryPoint : public Error {
public:
    using Error::Error;
};

/// Numerical solver did not meet its tolerance; carries the achieved residual.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Root search found no sign change of the residual on the scanned range.
class NoBracket : public Error {
public:
    using Error::Error;
};

}  // namespace tistop
