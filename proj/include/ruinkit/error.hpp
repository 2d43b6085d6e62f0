#pragma once

#include <stdexcept>
#include <string>

namespace ruinkit {

/// Raised when an argument lies outside the mathematical domain of an
/// operation (invalid parameters, missing moments, rho outside (0,1)).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a numerical procedure fails to deliver its contract
/// (bracket not found, quadrature did not converge, inconsistent roots).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ruinkit
