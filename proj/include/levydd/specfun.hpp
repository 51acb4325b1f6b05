#pragma once

#include <span>
#include <utility>
#include <vector>

namespace levydd {

// Standard normal density and distribution function. Non-finite inputs are
// rejected with DomainError.
double norm_pdf(double x);
double norm_cdf(double x);

/// log Phi(x), accurate far into the lower tail (no underflow).
double log_norm_cdf(double x);

/// C(x) = phi(x) + x Phi(x), i.e. E[max(x + Z, 0)] for standard normal Z.
double script_c(double x);

struct BivariateArgs {
  double x = 0.0;
  double y = 0.0;
  double rho = 0.0;
};

/// Owen's T function T(h, a) = (1/2pi) int_0^a exp(-h^2 (1+s^2)/2) / (1+s^2) ds.
double owens_t(double h, double a);

/// P(X < x, Y < y) for a standard bivariate normal pair with correlation rho.
/// x and y may be +/-infinity; |rho| = 1 uses the degenerate limits.
double binorm_cdf(const BivariateArgs& args);

/// Both left-hand sides of the bivariate-normal reciprocity law, for rho in
/// [0, 1] and rho* = sqrt(1 - rho^2):
///   first  = Phi2(-x,  rho x; -rho) + Phi2(x, -rho* x; -rho*)
///   second = Phi2(-x, -rho x;  rho) + Phi2(x,  rho* x;  rho*)
std::pair<double, double> reciprocity_pair(double x, double rho);

/// Modified Bessel function I_1 for x >= 0, and the scaled e^{-x} I_1(x).
double bessel_i1(double x);
double bessel_i1_scaled(double x);

/// W(a, b; t) = 2 / (pi (sqrt b - sqrt a)^2) int_a^b sqrt((b - z)(z - a)) / z e^{-z t} dz
/// for 0 <= a < b and t >= 0. W(a, b; 0) = 1 and W decreases in t.
double w_function(double a, double b, double t);

/// dW/dt through the Bessel identity
///   -((sqrt b + sqrt a)/(sqrt b - sqrt a)) e^{-(a+b)t/2} I_1((b-a)t/2) / t,
/// for t > 0.
double w_function_dt(double a, double b, double t);

struct CurvePoint {
  double t = 0.0;
  double value = 0.0;
};

/// Cumulative trapezium integral of density samples, offset by atom0.
/// Abscissae must be strictly increasing and values non-negative.
std::vector<CurvePoint> trapezium_cdf(std::span<const CurvePoint> density_samples, double atom0);

enum class ProductKind {
  pdf_pdf,        // int_0^inf phi(a1 - b1 x) phi(a2 - b2 x) dx
  pdf_cdf_minus,  // int_0^inf phi(a1 - b1 x) Phi(a2 - b2 x) dx
  pdf_cdf_plus,   // int_0^inf phi(a1 + b1 x) Phi(a2 - b2 x) dx
};

/// Closed forms for half-line integrals of products of normal functions.
double product_integral(ProductKind kind, double a1, double b1, double a2, double b2);

}  // namespace levydd
