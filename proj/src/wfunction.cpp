// The branch-cut integral W(a, b; t) and its t-derivative.
//
// With z = a + (b - a) u and eps = a / (b - a),
//   W = 2 (sqrt b + sqrt a)^2 / (pi (b - a)) e^{-a t}
//       * int_0^1 sqrt(u (1 - u)) e^{-(b - a) t u} / (u + eps) du.
// The integrand has square-root endpoint factors, a pole at u = -eps that
// can sit arbitrarily close to the interval, and an exponential boundary
// layer of width 1/((b - a) t). [0, 1/2] is cut into dyadic panels that
// shrink geometrically toward u = 0 until they resolve both scales; the end
// panels use Gauss-Jacobi rules carrying the square-root factor as weight.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levydd/errors.hpp"
#include "levydd/quadrature.hpp"
#include "levydd/specfun.hpp"

namespace levydd {

namespace {

constexpr std::size_t kOrder = 24;
// Panels starting beyond e^{-kCutoff} of the boundary layer are dropped.
constexpr double kCutoff = 60.0;
// Below this, the pole offset changes the integral by O(sqrt(eps)) < 1e-12.
constexpr double kTinyEps = 1e-24;

void check_ab(double a, double b, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError(std::string(what) + ": non-finite a or b");
  if (a < 0.0) throw DomainError(std::string(what) + ": a must be non-negative");
  if (!(b > a)) throw DomainError(std::string(what) + ": b must exceed a");
}

double branch_integral(double eps, double k) {
  static const QuadratureRule left_sqrt = gauss_jacobi(kOrder, 0.0, 0.5);
  static const QuadratureRule left_rsqrt = gauss_jacobi(kOrder, 0.0, -0.5);
  static const QuadratureRule right_sqrt = gauss_jacobi(kOrder, 0.5, 0.0);
  static const QuadratureRule interior = gauss_legendre(kOrder);

  const bool pole_at_zero = eps < kTinyEps;
  double scale = 0.5;
  if (!pole_at_zero) scale = std::min(scale, 0.5 * eps);
  if (k > 0.0) scale = std::min(scale, 0.5 / k);
  const int levels = static_cast<int>(std::ceil(std::log2(0.5 / scale)));
  const double s = std::ldexp(0.5, -levels);

  double sum = 0.0;
  if (pole_at_zero) {
    // sqrt(u)/u = s^{-1/2} (u/s)^{-1/2}
    sum += apply_rule(
        left_rsqrt, [k, s](double u) { return std::sqrt((1.0 - u) / s) * std::exp(-k * u); }, 0.0,
        s);
  } else {
    sum += apply_rule(
        left_sqrt,
        [k, s, eps](double u) { return std::sqrt(s * (1.0 - u)) * std::exp(-k * u) / (u + eps); },
        0.0, s);
  }
  auto full = [k, eps, pole_at_zero](double u) {
    const double base = std::sqrt(u * (1.0 - u)) * std::exp(-k * u);
    return pole_at_zero ? base / u : base / (u + eps);
  };
  for (double lo = s; lo < 0.5; lo *= 2.0) {
    if (k * lo > kCutoff) return sum;
    sum += apply_rule(interior, full, lo, 2.0 * lo);
  }
  if (k * 0.5 > kCutoff) return sum;
  // sqrt(1 - u) = 2^{-1/2} (2 (1 - u))^{1/2}
  sum += apply_rule(
      right_sqrt,
      [k, eps, pole_at_zero](double u) {
        const double d = pole_at_zero ? u : u + eps;
        return std::sqrt(0.5 * u) * std::exp(-k * u) / d;
      },
      0.5, 1.0);
  return sum;
}

}  // namespace

double w_function(double a, double b, double t) {
  check_ab(a, b, "w_function");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("w_function: t must be finite and non-negative");
  if (t == 0.0) return 1.0;
  const double c = b - a;
  const double sum_roots = std::sqrt(a) + std::sqrt(b);
  const double prefactor = 2.0 * sum_roots * sum_roots / (std::numbers::pi * c);
  const double decay = std::exp(-a * t);
  if (decay == 0.0) return 0.0;
  return std::min(1.0, prefactor * decay * branch_integral(a / c, c * t));
}

double w_function_dt(double a, double b, double t) {
  check_ab(a, b, "w_function_dt");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("w_function_dt: t must be positive");
  const double c = b - a;
  const double sum_roots = std::sqrt(a) + std::sqrt(b);
  const double ratio = sum_roots * sum_roots / c;  // (sqrt b + sqrt a)/(sqrt b - sqrt a)
  // e^{-(a+b)t/2} I_1((b-a)t/2) = e^{-a t} e^{-x} I_1(x), x = (b-a)t/2
  return -ratio * std::exp(-a * t) * bessel_i1_scaled(0.5 * c * t) / t;
}

}  // namespace levydd
