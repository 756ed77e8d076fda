#pragma once

#include <stdexcept>
#include <string>

namespace rsls {

// A numerical setting was too coarse for the requested output, e.g. a
// quadrature grid that cannot reproduce the density normalization. Maps to
// CLI exit code 2.
class AccuracyError : public std::runtime_error {
public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

// A Monte Carlo cross-check landed outside its tolerance. Maps to CLI exit
// code 3.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rsls
