#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kubilius {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: unknown names, malformed configs, violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A floating-point computation produced a nonfinite value.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// The class has no structures of the requested order (Q(n) = 0).
class EmptySupportError : public Error {
 public:
  explicit EmptySupportError(std::size_t n)
      : Error("empty support: no assemblies of order " + std::to_string(n)), n_(n) {}
  std::size_t order() const noexcept { return n_; }

 private:
  std::size_t n_;
};

class SamplerError : public Error {
 public:
  SamplerError(const std::string& what, double acceptance_estimate)
      : Error(what), acceptance_estimate_(acceptance_estimate) {}
  double acceptance_estimate() const noexcept { return acceptance_estimate_; }

 private:
  double acceptance_estimate_;
};

// Engine output disagrees with the brute-force oracle.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace kubilius
