#include "levydd/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "levydd/errors.hpp"

namespace levydd {

namespace {

// Three-term recurrence of the monic orthogonal polynomials,
//   p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x),
// plus the zeroth moment of the weight.
struct Recurrence {
  std::vector<double> a;  // a_0 .. a_{n-1}
  std::vector<double> b;  // b_0 (unused) .. b_n
  double mu0 = 0.0;
};

Recurrence legendre_recurrence(std::size_t n) {
  Recurrence r;
  r.a.assign(n, 0.0);
  r.b.assign(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    r.b[k] = kk * kk / (4.0 * kk * kk - 1.0);
  }
  r.mu0 = 2.0;
  return r;
}

Recurrence jacobi_recurrence(std::size_t n, double alpha, double beta) {
  Recurrence r;
  r.a.assign(n, 0.0);
  r.b.assign(n + 1, 0.0);
  const double ab = alpha + beta;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    r.a[k] = (k == 0) ? (beta - alpha) / (ab + 2.0)
                      : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    if (k == 1) {
      r.b[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      r.b[k] = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
               (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  r.mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                   std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  return r;
}

Recurrence laguerre_recurrence(std::size_t n, double alpha) {
  Recurrence r;
  r.a.assign(n, 0.0);
  r.b.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) r.a[k] = 2.0 * static_cast<double>(k) + alpha + 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    r.b[k] = kk * (kk + alpha);
  }
  r.mu0 = std::tgamma(alpha + 1.0);
  return r;
}

// Orthonormal polynomial values q_0..q_n at x, with q_n' returned separately.
struct OrthoEval {
  double sum_sq = 0.0;  // sum_{k<n} q_k(x)^2
  double qn = 0.0;
  double dqn = 0.0;
};

OrthoEval evaluate_orthonormal(const Recurrence& r, std::size_t n, double x) {
  OrthoEval out;
  double q_prev = 0.0, dq_prev = 0.0;
  double q = 1.0 / std::sqrt(r.mu0), dq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.sum_sq += q * q;
    const double sb_next = std::sqrt(r.b[k + 1]);
    const double sb = (k == 0) ? 0.0 : std::sqrt(r.b[k]);
    const double q_next = ((x - r.a[k]) * q - sb * q_prev) / sb_next;
    const double dq_next = (q + (x - r.a[k]) * dq - sb * dq_prev) / sb_next;
    q_prev = q;
    dq_prev = dq;
    q = q_next;
    dq = dq_next;
  }
  out.qn = q;
  out.dqn = dq;
  return out;
}

// Golub-Welsch for starting values, then Newton on the orthonormal q_n and
// Christoffel weights 1 / sum q_k^2, which keeps small weights accurate.
QuadratureRule build_rule(RuleKind kind, double alpha, double beta, const Recurrence& r,
                          std::size_t n) {
  if (n == 0) throw DomainError("quadrature order must be positive");
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 1));
  for (std::size_t k = 0; k < n; ++k) diag[static_cast<Eigen::Index>(k)] = r.a[k];
  for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(r.b[k]);
  if (n == 1) sub.resize(0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eig = solver.eigenvalues();

  QuadratureRule rule;
  rule.kind = kind;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = eig[static_cast<Eigen::Index>(i)];
    for (int it = 0; it < 8; ++it) {
      const OrthoEval e = evaluate_orthonormal(r, n, x);
      if (e.dqn == 0.0) break;
      const double dx = e.qn / e.dqn;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / evaluate_orthonormal(r, n, x).sum_sq;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  QuadratureRule rule = build_rule(RuleKind::legendre, 0.0, 0.0, legendre_recurrence(n), n);
  // Enforce exact antisymmetry of the nodes.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  return build_rule(RuleKind::jacobi, alpha, beta, jacobi_recurrence(n, alpha, beta), n);
}

QuadratureRule gauss_laguerre(std::size_t n, double alpha) {
  if (!(alpha > -1.0)) throw DomainError("Laguerre exponent must exceed -1");
  return build_rule(RuleKind::laguerre, alpha, 0.0, laguerre_recurrence(n, alpha), n);
}

double apply_rule(const QuadratureRule& rule, const std::function<double(double)>& f, double a,
                  double b) {
  if (rule.kind == RuleKind::laguerre) throw DomainError("apply_rule needs a finite-interval rule");
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.order(); ++i) {
    sum += rule.weights[i] * f(a + half * (1.0 + rule.nodes[i]));
  }
  double scale = half;
  if (rule.kind == RuleKind::jacobi) scale *= std::pow(2.0, -(rule.alpha + rule.beta));
  return scale * sum;
}

double integrate_legendre(const std::function<double(double)>& f, double a, double b,
                          std::size_t panels, std::size_t order) {
  if (panels == 0) throw DomainError("panel count must be positive");
  static const QuadratureRule gl20 = gauss_legendre(20);
  const QuadratureRule local = (order == 20) ? QuadratureRule{} : gauss_legendre(order);
  const QuadratureRule& rule = (order == 20) ? gl20 : local;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    sum += apply_rule(rule, f, lo, (p + 1 == panels) ? b : lo + h);
  }
  return sum;
}

}  // namespace levydd
