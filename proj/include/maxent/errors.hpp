#pragma once

#include <stdexcept>
#include <string>

namespace maxent {

/// Malformed or invariant-violating input data (bad document, zero weight,
/// dependent constraints, label out of range).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed: singular pairing, divergent iteration,
/// Newton non-convergence, overflow.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace maxent
