#include "levydd/specfun.hpp"

#include <cmath>
#include <numbers>

#include "levydd/errors.hpp"

namespace levydd {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
// The power series has no cancellation; the asymptotic series only reaches
// full double precision once its smallest term, about e^{-2x}, is below it.
constexpr double kSeriesLimit = 25.0;
constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056176;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": argument must be finite");
}

}  // namespace

double norm_pdf(double x) {
  require_finite(x, "norm_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
  require_finite(x, "norm_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double log_norm_cdf(double x) {
  if (std::isnan(x)) throw DomainError("log_norm_cdf: argument is NaN");
  if (x == -INFINITY) return -INFINITY;
  if (x == INFINITY) return 0.0;
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  if (x > -20.0) return std::log(0.5 * std::erfc(-x * kInvSqrt2));
  // Mills-ratio asymptotic series: Phi(x) ~ phi(x)/|x| sum (-1)^k (2k-1)!! / x^{2k}.
  const double z2 = 1.0 / (x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= -(2.0 * k - 1.0) * z2;
    sum += term;
  }
  return -0.5 * x * x - kLogSqrt2Pi - std::log(-x) + std::log(sum);
}

double script_c(double x) {
  require_finite(x, "script_c");
  return norm_pdf(x) + x * norm_cdf(x);
}

double bessel_i1(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_i1: argument must be non-negative");
  if (x <= kSeriesLimit) {
    const double h = 0.5 * x;
    const double h2 = h * h;
    double term = h, sum = h;
    for (int k = 1; k < 200; ++k) {
      term *= h2 / (static_cast<double>(k) * static_cast<double>(k + 1));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum;
  }
  return std::exp(x) * bessel_i1_scaled(x);
}

double bessel_i1_scaled(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_i1_scaled: argument must be non-negative");
  if (x <= kSeriesLimit) return std::exp(-x) * bessel_i1(x);
  // I_nu(x) ~ e^x / sqrt(2 pi x) sum_k (-1)^k prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! (8x)^k)
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (4.0 - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

std::vector<CurvePoint> trapezium_cdf(std::span<const CurvePoint> density_samples, double atom0) {
  if (!(atom0 >= 0.0 && atom0 <= 1.0)) throw DomainError("trapezium_cdf: atom0 must lie in [0, 1]");
  std::vector<CurvePoint> out;
  out.reserve(density_samples.size());
  double acc = atom0;
  for (std::size_t i = 0; i < density_samples.size(); ++i) {
    const CurvePoint& p = density_samples[i];
    if (!std::isfinite(p.t)) throw DomainError("trapezium_cdf: non-finite abscissa");
    if (!(p.value >= 0.0) || !std::isfinite(p.value))
      throw DomainError("trapezium_cdf: density samples must be finite and non-negative");
    if (i > 0) {
      const CurvePoint& q = density_samples[i - 1];
      if (!(p.t > q.t)) throw DomainError("trapezium_cdf: abscissae must be strictly increasing");
      acc += 0.5 * (p.value + q.value) * (p.t - q.t);
    }
    out.push_back({p.t, acc});
  }
  return out;
}

double product_integral(ProductKind kind, double a1, double b1, double a2, double b2) {
  for (double v : {a1, b1, a2, b2}) require_finite(v, "product_integral");
  if (!(b1 > 0.0)) throw DomainError("product_integral: b1 must be positive");
  const double bstar = std::hypot(b1, b2);
  switch (kind) {
    case ProductKind::pdf_pdf: {
      if (!(b2 > 0.0)) throw DomainError("product_integral: b2 must be positive for pdf_pdf");
      const double astar = (a1 * b1 + a2 * b2) / bstar;
      return norm_pdf((a1 * b2 - a2 * b1) / bstar) * norm_cdf(astar) / bstar;
    }
    case ProductKind::pdf_cdf_minus:
      return binorm_cdf({a1, (a2 * b1 - a1 * b2) / bstar, -b2 / bstar}) / b1;
    case ProductKind::pdf_cdf_plus:
      return binorm_cdf({-a1, (a2 * b1 + a1 * b2) / bstar, -b2 / bstar}) / b1;
  }
  throw DomainError("product_integral: unknown kind");
}

}  // namespace levydd
