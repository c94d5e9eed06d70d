#pragma once

#include <complex>
#include <span>
#include <vector>

namespace momentum_margin {

// Dense real polynomials as coefficient vectors in descending powers of z;
// coeffs[0] is the leading coefficient.

std::vector<double> poly_mul(std::span<const double> a, std::span<const double> b);

/// Sum with right-aligned (constant-term-aligned) coefficients.
std::vector<double> poly_add(std::span<const double> a, std::span<const double> b);

std::complex<double> poly_eval(std::span<const double> coeffs, std::complex<double> z);

/// Divides through by the leading coefficient; throws if it is zero.
std::vector<double> poly_monic(std::span<const double> coeffs);

int poly_degree(std::span<const double> coeffs);

}  // namespace momentum_margin
