#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "levydd/models.hpp"
#include "levydd/specfun.hpp"

namespace levydd {

/// Density of the drawdown time split as first(T - t) * second_cont(t), plus
/// a delta at t = 0 with weight first(T) * second_atom_coeff.
struct FactorPair {
  std::function<double(double)> first_factor;
  std::function<double(double)> second_factor_cont;
  double second_factor_atom_coeff = 0.0;
};

/// Law of the drawdown time on [0, T]: point masses at 0 and T and a
/// continuous density in between. Cheap to copy; immutable.
class DrawdownDistribution {
 public:
  using Curve = std::function<double(double)>;

  /// `density` must accept the endpoints (returning one-sided limits) and
  /// `scaled` is f(t) sqrt(t (T - t)), finite on all of [0, T]. Without
  /// `closed_cdf` the CDF is tabulated once at construction.
  DrawdownDistribution(double horizon_T, double atom0, double atomT, Curve density, Curve scaled,
                       std::optional<FactorPair> factors = std::nullopt,
                       Curve closed_cdf = nullptr);

  /// All mass at T.
  static DrawdownDistribution degenerate_at_horizon(double horizon_T);

  double horizon() const;
  double atom0() const;
  double atomT() const;

  /// f(t) for t in [0, T]; the endpoints give one-sided limits, possibly inf.
  double density_at(double t) const;
  double scaled_density(double t) const;

  /// atom0 + int_0^t f. The mass at T is not included, so cdf(T) = 1 - atomT.
  double cdf(double t) const;

  /// int_0^T f from the construction-time table (or closed form).
  double continuous_mass() const;

  /// Trapezium-rule CDF on `points` nodes uniform in the angle phi of
  /// t = T (1 - cos phi) / 2, which absorbs the inverse-square-root endpoint
  /// behaviour of the density. Returned abscissae are times.
  std::vector<CurvePoint> trapezium_curve(std::size_t points = 2001) const;
  /// atom0 + atomT + trapezium integral of the density.
  double trapezium_total(std::size_t points = 2001) const;

  const std::optional<FactorPair>& factors() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Brownian motion with drift.
double brownian_density(const BrownianParams& p, double T, double t);
/// Same density through E[max(X_s, 0)] factors; an independent route.
double brownian_density_factored(const BrownianParams& p, double T, double t);
double brownian_cdf(const BrownianParams& p, double T, double t);
/// Upper tail P(M_t > y) of the running maximum.
double brownian_max_cdf(const BrownianParams& p, double t, double y);
double brownian_max_density(const BrownianParams& p, double t, double y);
/// Joint density of (X_t, M_t); zero off {x < y, y > 0}.
double brownian_joint_density(const BrownianParams& p, double t, double x, double y);
DrawdownDistribution brownian_distribution(const BrownianParams& p, double T);

// Drift with exponential down-jumps. Factors and atoms need mu > 0.
double expjump_factor1(const ExpJumpParams& p, double u);
double expjump_factor2_cont(const ExpJumpParams& p, double t);
double expjump_atom0(const ExpJumpParams& p, double T);
/// Large-drift approximation 1 - (lambda xi / mu)(1 - e^{-mu T / xi}).
double expjump_atom0_asymptotic(const ExpJumpParams& p, double T);
/// mu <= 0 gives the degenerate law with all mass at T.
DrawdownDistribution expjump_distribution(const ExpJumpParams& p, double T);

// Drift minus an Inverse Gaussian subordinator.
double ig_factor1(const IGParams& p, double u);
double ig_factor2_cont(const IGParams& p, double t);
double ig_atom0(const IGParams& p, double T);
DrawdownDistribution ig_distribution(const IGParams& p, double T);

DrawdownDistribution drawdown_distribution(const LevyModel& model, double T);

}  // namespace levydd
