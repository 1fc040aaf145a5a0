#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mspe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- input errors ----------------------------------------------------------

class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NegativeCoefficient : public ParseError {
 public:
  NegativeCoefficient(std::size_t line, std::size_t column)
      : ParseError("negative coefficient (coefficients must be non-negative)", line, column) {}
};

class UndefinedVariable : public ParseError {
 public:
  UndefinedVariable(const std::string& name, std::size_t line, std::size_t column)
      : ParseError("undefined variable '" + name + "'", line, column), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ProbabilitySumViolation : public InputError {
 public:
  ProbabilitySumViolation(const std::string& state, const std::string& symbol, const std::string& sum)
      : InputError("probabilities of rules from (" + state + ", " + symbol + ") sum to " + sum +
                   ", expected 1"),
        state_(state),
        symbol_(symbol) {}
  const std::string& state() const noexcept { return state_; }
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string state_;
  std::string symbol_;
};

class RhsTooLong : public ParseError {
 public:
  RhsTooLong(std::size_t line, std::size_t column)
      : ParseError("right-hand side pushes more than two stack symbols", line, column) {}
};

class InvalidModel : public InputError {
 public:
  using InputError::InputError;
};

// --- structural errors -------------------------------------------------------

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class AllVariablesUnproductive : public Error {
 public:
  AllVariablesUnproductive() : Error("all variables are unproductive; the cleaned system is empty") {}
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// --- solver errors -----------------------------------------------------------

class SolverError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public SolverError {
 public:
  using SolverError::SolverError;
};

class InfeasibleSuspected : public Error {
 public:
  using Error::Error;
};

// --- certification errors ----------------------------------------------------

class CertificationError : public Error {
 public:
  using Error::Error;
};

class MissingUpperBound : public CertificationError {
 public:
  MissingUpperBound() : CertificationError("no verified upper bound u with f(u) <= u is installed") {}
};

class ZeroLowerBound : public CertificationError {
 public:
  ZeroLowerBound()
      : CertificationError("lower bound has a zero component; run more iterations") {}
};

class NotTerminationSystem : public CertificationError {
 public:
  NotTerminationSystem()
      : CertificationError("system is not flagged as a strongly connected termination MSPE") {}
};

class NotStrictSystem : public CertificationError {
 public:
  NotStrictSystem() : CertificationError("system is not flagged as derived from a strict pPDA") {}
};

class NotCertifiable : public CertificationError {
 public:
  using CertificationError::CertificationError;
};

}  // namespace mspe
