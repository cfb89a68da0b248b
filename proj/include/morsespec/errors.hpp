#pragma once

#include <stdexcept>
#include <string>

namespace morsespec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: non-positive volatility, empty grids, and so on.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Argument sits on a pole of Γ (or of 1F1 through its lower parameter).
class PoleError : public Error {
public:
    using Error::Error;
};

/// A series or iteration did not meet its tolerance within the allowed work.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Whittaker index with 2μ an integer that could not be resolved by perturbation.
class DegenerateIndex : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

/// Resolvent evaluated on (or within 1e-10 of) the spectrum.
class SpectrumError : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// Semi-infinite integrand kept growing and no truncation envelope was supplied.
class MissingEnvelope : public QuadratureFailure {
public:
    using QuadratureFailure::QuadratureFailure;
};

/// Market parameters outside the ν < 1 regime covered by the spectral formula.
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

}  // namespace morsespec
