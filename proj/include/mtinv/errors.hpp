#pragma once

#include <stdexcept>
#include <string>

namespace mtinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (bad fractions, malformed config, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class NonPositiveFrequency : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A bracket [1 + A_jj (eps_i - eps_0)/eps_0] or a denominator vanished.
class SingularDenominator : public Error {
public:
    using Error::Error;
};

/// The measured value lies outside the image of the forward model.
class EmptyMinimizerSet : public Error {
public:
    using Error::Error;
};

/// Charnes-Cooper scale s collapsed to zero.
class DegenerateScale : public Error {
public:
    using Error::Error;
};

class InfeasibleMeasurement : public Error {
public:
    using Error::Error;
};

class SingularSensitivity : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

} // namespace mtinv
