#include "pdmosc/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdmosc {

ModelParams::ModelParams(double lambda, double omega, double hbar, int dim)
    : lambda_(lambda), omega_(omega), hbar_(hbar), dim_(dim) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("lambda must be finite and >= 0");
  if (!std::isfinite(omega) || omega < 0.0)
    throw std::invalid_argument("omega must be finite and >= 0");
  if (!std::isfinite(hbar) || hbar <= 0.0)
    throw std::invalid_argument("hbar must be finite and > 0");
  if (dim < 1)
    throw std::invalid_argument("dim must be >= 1");
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os << "lambda=" << lambda_ << " omega=" << omega_ << " hbar=" << hbar_
     << " dim=" << dim_;
  return os.str();
}

}  // namespace pdmosc
