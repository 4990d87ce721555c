#pragma once

#include <stdexcept>

namespace qm {

// Error taxonomy shared by the whole library. The CLI maps these onto its
// exit codes: ConfigError / ValidationError / IndexError / ParseError -> 2,
// NumericError -> 3.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad setup values: qubit counts, optimizer hyperparameters, experiment
// configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// Arguments that violate an operation's contract (shape or value).
class ValidationError : public Error {
  public:
    using Error::Error;
};

// Qubit or parameter index out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

// Non-finite values or a failed numerical procedure (e.g. an eigensolver
// that did not converge).
class NumericError : public Error {
  public:
    using Error::Error;
};

// Malformed input files; the message names the offending line where known.
class ParseError : public Error {
  public:
    using Error::Error;
};

} // namespace qm
