#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ufb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or index mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// det S_vv vanishes identically; no Wiener synthesis filter exists.
class SingularBankError : public Error {
 public:
  SingularBankError(const std::string& what, std::size_t rank_defect, std::string certificate)
      : Error(what), rank_defect_(rank_defect), certificate_(std::move(certificate)) {}

  std::size_t rank_defect() const noexcept { return rank_defect_; }
  const std::string& certificate() const noexcept { return certificate_; }

 private:
  std::size_t rank_defect_;
  std::string certificate_;
};

class NonCausalError : public Error {
 public:
  using Error::Error;
};

class UnstableSolutionError : public Error {
 public:
  UnstableSolutionError(const std::string& what, std::vector<std::complex<double>> poles)
      : Error(what), poles_(std::move(poles)) {}
  const std::vector<std::complex<double>>& poles() const noexcept { return poles_; }

 private:
  std::vector<std::complex<double>> poles_;
};

class RootFindingError : public Error {
 public:
  RootFindingError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Input or desired sequence ran out before the requested number of iterations.
class SequenceExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point where a closed-form ratio has a vanishing denominator.
class EvaluationSingularError : public Error {
 public:
  using Error::Error;
};

}  // namespace ufb
