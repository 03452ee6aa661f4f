#pragma once

#include <string>

namespace pdmosc {

/// Physical configuration of the deformed oscillator
///   H = (p^2 + omega^2 q^2) / (2 (1 + lambda q^2))
/// in N dimensions. Every module takes one of these by const reference.
///
/// Values are dimensionless (natural units). The constructor rejects
/// lambda < 0, omega < 0, hbar <= 0 and dim < 1 with std::invalid_argument.
class ModelParams {
public:
  ModelParams(double lambda, double omega, double hbar = 1.0, int dim = 3);

  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double omega() const noexcept { return omega_; }
  [[nodiscard]] double hbar() const noexcept { return hbar_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }

  [[nodiscard]] bool deformed() const noexcept { return lambda_ > 0.0; }

  [[nodiscard]] ModelParams with_lambda(double lambda) const {
    return {lambda, omega_, hbar_, dim_};
  }
  [[nodiscard]] ModelParams with_dim(int dim) const {
    return {lambda_, omega_, hbar_, dim};
  }

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
  double lambda_;
  double omega_;
  double hbar_;
  int dim_;
};

}  // namespace pdmosc
