// Bivariate normal distribution function.
//
// Phi2 is split into two Owen T functions (Owen 1956). Each T(h, a) with
// |a| > 1 is mapped to T(a h, 1/a) by the reciprocity law, so the integral
// that is actually evaluated always has |a| <= 1, i.e. an effective
// correlation of at most 1/sqrt(2). That integral is smooth on a bounded
// interval and Gauss-Legendre converges geometrically.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levydd/errors.hpp"
#include "levydd/quadrature.hpp"
#include "levydd/specfun.hpp"

namespace levydd {

namespace {

// Phi with +/-inf handled.
double cdf_ext(double x) {
  if (x == INFINITY) return 1.0;
  if (x == -INFINITY) return 0.0;
  return norm_cdf(x);
}

// T(h, a) for h >= 0 and 0 <= a <= 1.
double owens_t_reduced(double h, double a) {
  if (a == 0.0) return 0.0;
  const double h2 = 0.5 * h * h;
  if (h2 > 745.0) return 0.0;
  static const QuadratureRule rule = gauss_legendre(20);
  const std::size_t panels = 1 + static_cast<std::size_t>(std::min(20.0, h * a / 1.5));
  const double width = a / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = width * static_cast<double>(p);
    sum += apply_rule(
        rule, [h2](double s) { return std::exp(-h2 * s * s) / (1.0 + s * s); }, lo, lo + width);
  }
  return std::exp(-h2) * sum / (2.0 * std::numbers::pi);
}

}  // namespace

double owens_t(double h, double a) {
  if (std::isnan(h) || std::isnan(a)) throw DomainError("owens_t: NaN argument");
  if (a < 0.0) return -owens_t(h, -a);
  h = std::abs(h);
  if (h == INFINITY) return 0.0;
  if (a == INFINITY) return 0.5 * norm_cdf(-h);
  if (a <= 1.0) return owens_t_reduced(h, a);
  // Reciprocity: T(h, a) + T(a h, 1/a) = (q1 + q2)/2 - q1 q2 for h >= 0,
  // with q1 = Phi(-h), q2 = Phi(-a h).
  const double ah = a * h;
  const double q1 = norm_cdf(-h);
  const double q2 = (ah == INFINITY) ? 0.0 : norm_cdf(-ah);
  return 0.5 * (q1 + q2) - q1 * q2 - owens_t_reduced(ah, 1.0 / a);
}

double binorm_cdf(const BivariateArgs& args) {
  const double x = args.x, y = args.y, rho = args.rho;
  if (std::isnan(x) || std::isnan(y) || std::isnan(rho))
    throw DomainError("binorm_cdf: NaN argument");
  if (!(std::abs(rho) <= 1.0)) throw DomainError("binorm_cdf: |rho| must not exceed 1");

  if (x == -INFINITY || y == -INFINITY) return 0.0;
  if (x == INFINITY) return cdf_ext(y);
  if (y == INFINITY) return cdf_ext(x);

  const double px = norm_cdf(x), py = norm_cdf(y);
  if (rho == 1.0) return std::min(px, py);
  if (rho == -1.0) return std::max(px - norm_cdf(-y), 0.0);
  if (x == 0.0 && y == 0.0) return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);

  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  auto slope = [s, rho](double h, double k) {
    const double num = k - rho * h;
    if (h != 0.0) return num / (h * s);
    if (num == 0.0) return 0.0;
    return std::copysign(INFINITY, num);
  };
  const double beta = (x * y > 0.0 || (x * y == 0.0 && x + y >= 0.0)) ? 0.0 : 0.5;
  const double value =
      0.5 * (px + py) - owens_t(x, slope(x, y)) - owens_t(y, slope(y, x)) - beta;
  return std::clamp(value, std::max(0.0, px + py - 1.0), std::min(px, py));
}

std::pair<double, double> reciprocity_pair(double x, double rho) {
  if (!std::isfinite(x)) throw DomainError("reciprocity_pair: x must be finite");
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("reciprocity_pair: rho must lie in [0, 1]");
  const double rs = std::sqrt((1.0 - rho) * (1.0 + rho));
  const double first = binorm_cdf({-x, rho * x, -rho}) + binorm_cdf({x, -rs * x, -rs});
  const double second = binorm_cdf({-x, -rho * x, rho}) + binorm_cdf({x, rs * x, rs});
  return {first, second};
}

}  // namespace levydd
