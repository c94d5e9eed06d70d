#include "momentum_margin/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace momentum_margin {

std::vector<double> poly_mul(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

std::vector<double> poly_add(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[n - a.size() + i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[n - b.size() + i] += b[i];
  return out;
}

std::complex<double> poly_eval(std::span<const double> coeffs, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (double c : coeffs) acc = acc * z + c;
  return acc;
}

std::vector<double> poly_monic(std::span<const double> coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0) {
    throw std::invalid_argument("poly_monic: zero leading coefficient");
  }
  std::vector<double> out(coeffs.begin(), coeffs.end());
  const double lead = out.front();
  for (double& c : out) c /= lead;
  out.front() = 1.0;
  return out;
}

int poly_degree(std::span<const double> coeffs) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) return static_cast<int>(coeffs.size() - 1 - i);
  }
  return -1;
}

}  // namespace momentum_margin
