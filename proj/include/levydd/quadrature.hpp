#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace levydd {

enum class RuleKind { legendre, jacobi, laguerre };

/// Gauss rule on a canonical interval.
///
///   legendre: [-1, 1], weight 1
///   jacobi:   [-1, 1], weight (1 - x)^alpha (1 + x)^beta
///   laguerre: [0, inf), weight x^alpha e^{-x}
///
/// Nodes are strictly increasing and all weights are positive.
struct QuadratureRule {
  RuleKind kind = RuleKind::legendre;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t order() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(std::size_t n);
QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta);
QuadratureRule gauss_laguerre(std::size_t n, double alpha = 0.0);

/// Composite Gauss-Legendre integral of f over [a, b] split into `panels`
/// equal sub-intervals.
double integrate_legendre(const std::function<double(double)>& f, double a,
                          double b, std::size_t panels = 1,
                          std::size_t order = 20);

/// Applies a Legendre or Jacobi rule mapped affinely onto [a, b]. For Jacobi
/// rules the weight becomes ((b - u)/(b - a))^alpha ((u - a)/(b - a))^beta
/// times the Jacobian; f supplies the remaining smooth factor.
double apply_rule(const QuadratureRule& rule,
                  const std::function<double(double)>& f, double a, double b);

}  // namespace levydd
