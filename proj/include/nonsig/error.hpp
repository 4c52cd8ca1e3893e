#pragma once

#include <stdexcept>
#include <string>

namespace nonsig {

/// Malformed input: unreadable files, bad JSON, symbols outside an alphabet.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed object that fails a domain requirement (signaling resource,
/// invalid tree, zero-probability conditioning, infeasible decomposition...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nonsig
