#include "levydd/drawdown.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "levydd/errors.hpp"
#include "levydd/quadrature.hpp"

namespace levydd {

namespace {

constexpr double kPi = std::numbers::pi;
// phi-intervals of the construction-time CDF table
constexpr std::size_t kTableIntervals = 2000;

void check_horizon(double T) {
  if (!std::isfinite(T) || !(T > 0.0)) throw DomainError("horizon T must be positive and finite");
}

void check_open(double T, double t, const char* what) {
  check_horizon(T);
  if (!(t > 0.0 && t < T)) throw DomainError(std::string(what) + ": t must lie in (0, T)");
}

double time_of_angle(double T, double phi) { return 0.5 * T * (1.0 - std::cos(phi)); }

double angle_of_time(double T, double t) {
  return 2.0 * std::asin(std::sqrt(std::clamp(t / T, 0.0, 1.0)));
}

// ----- Brownian -------------------------------------------------------------

// 2 C(m sqrt(T - t)) C(-m sqrt t) with m = mu / sigma; this is
// f(t) sqrt(t (T - t)) and is finite on [0, T].
double brownian_scaled(const BrownianParams& p, double T, double t) {
  const double m = p.mu / p.sigma;
  return 2.0 * script_c(m * std::sqrt(std::max(T - t, 0.0))) * script_c(-m * std::sqrt(std::max(t, 0.0)));
}

double expected_positive_part(const BrownianParams& p, double s) {
  const double rs = std::sqrt(s);
  return p.sigma * rs * script_c(p.mu * rs / p.sigma);
}

// ----- ExpJump --------------------------------------------------------------

void check_positive_drift(const ExpJumpParams& p, const char* what) {
  validate(p);
  if (!(p.mu > 0.0)) throw DomainError(std::string(what) + ": needs mu > 0");
}

double expjump_first(const ExpJumpParams& p, double u) {
  const auto [a, b] = expjump_w_args(p);
  const double jump_rate = p.lambda * p.xi;
  const double w = w_function(a, b, u);
  if (p.mu >= jump_rate) return p.mu - jump_rate + jump_rate * w;
  return p.mu * w;
}

double expjump_second(const ExpJumpParams& p, double t) {
  const auto [a, b] = expjump_w_args(p);
  const double w = w_function(a, b, t);
  if (p.mu >= p.lambda * p.xi) return p.lambda / p.mu * w;
  return p.lambda / p.mu - 1.0 / p.xi + w / p.xi;
}

// ----- IG -------------------------------------------------------------------

double ig_first(const IGParams& p, double u) {
  if (u == 0.0) return p.mu;
  const double ab = p.alpha * p.beta;
  const double r = std::sqrt(u / (p.beta * p.mu));
  // e^{2 alpha u} Phi(-(alpha beta + mu) r) overflows term by term for large u.
  const double lifted = std::exp(2.0 * p.alpha * u + log_norm_cdf(-(ab + p.mu) * r));
  return (p.mu + ab) * lifted + (p.mu - ab) * norm_cdf((p.mu - ab) * r);
}

// sqrt(t) times the continuous second factor; finite at t = 0.
double ig_second_scaled(const IGParams& p, double t) {
  const double bm = p.beta * p.mu;
  return 2.0 * p.alpha * std::sqrt(bm) / (p.mu * p.mu) *
         script_c((p.alpha * p.beta - p.mu) * std::sqrt(t / bm));
}

}  // namespace

// ----- DrawdownDistribution -------------------------------------------------

struct DrawdownDistribution::Impl {
  double T = 0.0;
  double atom0 = 0.0;
  double atomT = 0.0;
  Curve density;
  Curve scaled;
  std::optional<FactorPair> factors;
  Curve closed_cdf;
  // Cumulative continuous mass and scaled density at phi_k = k h.
  std::vector<double> table_mass;
  std::vector<double> table_scaled;
  double mass = 0.0;

  void build_table() {
    static const QuadratureRule gl3 = gauss_legendre(3);
    const double h = kPi / kTableIntervals;
    table_mass.assign(kTableIntervals + 1, 0.0);
    table_scaled.assign(kTableIntervals + 1, 0.0);
    for (std::size_t k = 0; k <= kTableIntervals; ++k)
      table_scaled[k] = scaled(time_of_angle(T, h * static_cast<double>(k)));
    table_scaled[kTableIntervals] = scaled(T);
    for (std::size_t k = 0; k < kTableIntervals; ++k) {
      const double lo = h * static_cast<double>(k);
      const double piece = apply_rule(
          gl3, [this](double phi) { return scaled(time_of_angle(T, phi)); }, lo, lo + h);
      table_mass[k + 1] = table_mass[k] + piece;
    }
    mass = table_mass.back();
  }

  double continuous_cdf(double t) const {
    if (closed_cdf) return closed_cdf(t) - atom0;
    if (t <= 0.0) return 0.0;
    if (t >= T) return mass;
    const double h = kPi / kTableIntervals;
    const double phi = angle_of_time(T, t);
    const std::size_t k = std::min(static_cast<std::size_t>(phi / h), kTableIntervals - 1);
    const double s = (phi - h * static_cast<double>(k)) / h;
    const double s2 = s * s, s3 = s2 * s;
    // cubic Hermite with dF/dphi = scaled density
    return (2 * s3 - 3 * s2 + 1) * table_mass[k] + (s3 - 2 * s2 + s) * h * table_scaled[k] +
           (-2 * s3 + 3 * s2) * table_mass[k + 1] + (s3 - s2) * h * table_scaled[k + 1];
  }
};

DrawdownDistribution::DrawdownDistribution(double horizon_T, double atom0, double atomT,
                                           Curve density, Curve scaled,
                                           std::optional<FactorPair> factors, Curve closed_cdf) {
  check_horizon(horizon_T);
  if (!(atom0 >= 0.0 && atom0 <= 1.0) || !(atomT >= 0.0 && atomT <= 1.0))
    throw DomainError("atoms must lie in [0, 1]");
  if (!density || !scaled) throw DomainError("density callbacks are required");
  auto impl = std::make_shared<Impl>();
  impl->T = horizon_T;
  impl->atom0 = atom0;
  impl->atomT = atomT;
  impl->density = std::move(density);
  impl->scaled = std::move(scaled);
  impl->factors = std::move(factors);
  impl->closed_cdf = std::move(closed_cdf);
  if (impl->closed_cdf)
    impl->mass = impl->closed_cdf(horizon_T) - atom0;
  else
    impl->build_table();
  impl_ = std::move(impl);
}

DrawdownDistribution DrawdownDistribution::degenerate_at_horizon(double horizon_T) {
  auto zero = [](double) { return 0.0; };
  return DrawdownDistribution(horizon_T, 0.0, 1.0, zero, zero, std::nullopt, zero);
}

double DrawdownDistribution::horizon() const { return impl_->T; }
double DrawdownDistribution::atom0() const { return impl_->atom0; }
double DrawdownDistribution::atomT() const { return impl_->atomT; }

double DrawdownDistribution::density_at(double t) const {
  if (!(t >= 0.0 && t <= impl_->T)) throw DomainError("density_at: t must lie in [0, T]");
  return impl_->density(t);
}

double DrawdownDistribution::scaled_density(double t) const {
  if (!(t >= 0.0 && t <= impl_->T)) throw DomainError("scaled_density: t must lie in [0, T]");
  return impl_->scaled(t);
}

double DrawdownDistribution::cdf(double t) const {
  if (!(t >= 0.0 && t <= impl_->T)) throw DomainError("cdf: t must lie in [0, T]");
  const double value = impl_->atom0 + impl_->continuous_cdf(t);
  return std::clamp(value, 0.0, 1.0 - impl_->atomT);
}

double DrawdownDistribution::continuous_mass() const { return impl_->mass; }

std::vector<CurvePoint> DrawdownDistribution::trapezium_curve(std::size_t points) const {
  if (points < 2) throw DomainError("trapezium_curve: need at least two points");
  std::vector<CurvePoint> samples(points);
  const double h = kPi / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double phi = k + 1 == points ? kPi : h * static_cast<double>(k);
    samples[k] = {phi, impl_->scaled(time_of_angle(impl_->T, phi))};
  }
  auto curve = trapezium_cdf(samples, impl_->atom0);
  for (auto& point : curve) point.t = time_of_angle(impl_->T, point.t);
  curve.back().t = impl_->T;
  return curve;
}

double DrawdownDistribution::trapezium_total(std::size_t points) const {
  return trapezium_curve(points).back().value + impl_->atomT;
}

const std::optional<FactorPair>& DrawdownDistribution::factors() const { return impl_->factors; }

// ----- Brownian -------------------------------------------------------------

double brownian_density(const BrownianParams& p, double T, double t) {
  validate(p);
  check_open(T, t, "brownian_density");
  return brownian_scaled(p, T, t) / std::sqrt(t * (T - t));
}

double brownian_density_factored(const BrownianParams& p, double T, double t) {
  validate(p);
  check_open(T, t, "brownian_density_factored");
  const double up = expected_positive_part(p, T - t) / (T - t);
  const double down = expected_positive_part(BrownianParams{-p.mu, p.sigma}, t) / t;
  return up * down * 2.0 / (p.sigma * p.sigma);
}

double brownian_cdf(const BrownianParams& p, double T, double t) {
  validate(p);
  check_horizon(T);
  if (!(t >= 0.0 && t <= T)) throw DomainError("brownian_cdf: t must lie in [0, T]");
  if (t == 0.0) return 0.0;
  if (t == T) return 1.0;
  const double m = p.mu / p.sigma;
  const double rT = std::sqrt(T), rt = std::sqrt(t), rr = std::sqrt(T - t);
  const double mT = m * rT, mt = m * rt, mr = m * rr;
  double value = norm_cdf(mT) - mT * norm_pdf(mT);
  value += 2.0 * (1.0 + m * m * (T - t)) * binorm_cdf({mr, -mT, -std::sqrt((T - t) / T)});
  value -= 2.0 * (1.0 + m * m * t) * binorm_cdf({-mt, mT, -std::sqrt(t / T)});
  value += 2.0 * mr * norm_pdf(mr) * norm_cdf(-mt);
  value += 2.0 * mt * norm_pdf(mt) * norm_cdf(mr);
  return std::clamp(value, 0.0, 1.0);
}

double brownian_max_cdf(const BrownianParams& p, double t, double y) {
  validate(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("brownian_max_cdf: t must be positive");
  if (!(y >= 0.0)) throw DomainError("brownian_max_cdf: y must be non-negative");
  if (std::isinf(y)) return 0.0;
  const double v2 = p.sigma * p.sigma, sd = p.sigma * std::sqrt(t);
  const double reflected = std::exp(2.0 * p.mu * y / v2 + log_norm_cdf((-p.mu * t - y) / sd));
  return std::clamp(norm_cdf((p.mu * t - y) / sd) + reflected, 0.0, 1.0);
}

double brownian_max_density(const BrownianParams& p, double t, double y) {
  validate(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("brownian_max_density: t must be positive");
  if (!(y > 0.0)) throw DomainError("brownian_max_density: y must be positive");
  const double v2 = p.sigma * p.sigma, sd = p.sigma * std::sqrt(t);
  const double reflected = std::exp(2.0 * p.mu * y / v2 + log_norm_cdf((-y - p.mu * t) / sd));
  return 2.0 / sd * norm_pdf((y - p.mu * t) / sd) - 2.0 * p.mu / v2 * reflected;
}

double brownian_joint_density(const BrownianParams& p, double t, double x, double y) {
  validate(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("brownian_joint_density: t must be positive");
  if (!(y > 0.0) || !(x < y)) return 0.0;
  const double v2 = p.sigma * p.sigma;
  const double shift = 2.0 * y - x + p.mu * t;
  const double exponent = (-shift * shift + 4.0 * p.mu * y * t) / (2.0 * v2 * t);
  return 2.0 * (2.0 * y - x) / std::sqrt(2.0 * kPi * v2 * v2 * v2 * t * t * t) * std::exp(exponent);
}

DrawdownDistribution brownian_distribution(const BrownianParams& p, double T) {
  validate(p);
  check_horizon(T);
  auto scaled = [p, T](double t) { return brownian_scaled(p, T, t); };
  auto density = [p, T](double t) {
    const double w = brownian_scaled(p, T, t);
    const double g = t * (T - t);
    return g > 0.0 ? w / std::sqrt(g) : HUGE_VAL;
  };
  auto cdf = [p, T](double t) { return brownian_cdf(p, T, t); };
  return DrawdownDistribution(T, 0.0, 0.0, density, scaled, std::nullopt, cdf);
}

// ----- ExpJump --------------------------------------------------------------

double expjump_factor1(const ExpJumpParams& p, double u) {
  check_positive_drift(p, "expjump_factor1");
  if (!(u >= 0.0)) throw DomainError("expjump_factor1: u must be non-negative");
  return expjump_first(p, u);
}

double expjump_factor2_cont(const ExpJumpParams& p, double t) {
  check_positive_drift(p, "expjump_factor2_cont");
  if (!(t > 0.0)) throw DomainError("expjump_factor2_cont: t must be positive");
  return expjump_second(p, t);
}

double expjump_atom0(const ExpJumpParams& p, double T) {
  check_positive_drift(p, "expjump_atom0");
  check_horizon(T);
  return std::clamp(expjump_first(p, T) / p.mu, 0.0, 1.0);
}

double expjump_atom0_asymptotic(const ExpJumpParams& p, double T) {
  check_positive_drift(p, "expjump_atom0_asymptotic");
  check_horizon(T);
  return 1.0 - p.lambda * p.xi / p.mu * -std::expm1(-p.mu * T / p.xi);
}

DrawdownDistribution expjump_distribution(const ExpJumpParams& p, double T) {
  validate(p);
  check_horizon(T);
  if (p.mu <= 0.0) return DrawdownDistribution::degenerate_at_horizon(T);
  auto density = [p, T](double t) { return expjump_first(p, T - t) * expjump_second(p, t); };
  auto scaled = [density, T](double t) { return density(t) * std::sqrt(std::max(t * (T - t), 0.0)); };
  FactorPair factors{[p](double u) { return expjump_first(p, u); },
                     [p](double t) { return expjump_second(p, t); }, 1.0 / p.mu};
  return DrawdownDistribution(T, expjump_atom0(p, T), 0.0, density, scaled, std::move(factors));
}

// ----- IG -------------------------------------------------------------------

double ig_factor1(const IGParams& p, double u) {
  validate(p);
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("ig_factor1: u must be non-negative");
  return ig_first(p, u);
}

double ig_factor2_cont(const IGParams& p, double t) {
  validate(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("ig_factor2_cont: t must be positive");
  return ig_second_scaled(p, t) / std::sqrt(t);
}

double ig_atom0(const IGParams& p, double T) {
  validate(p);
  check_horizon(T);
  return std::clamp(ig_first(p, T) / p.mu, 0.0, 1.0);
}

DrawdownDistribution ig_distribution(const IGParams& p, double T) {
  validate(p);
  check_horizon(T);
  auto density = [p, T](double t) {
    return t > 0.0 ? ig_first(p, T - t) * ig_second_scaled(p, t) / std::sqrt(t) : HUGE_VAL;
  };
  auto scaled = [p, T](double t) {
    const double u = std::max(T - t, 0.0);
    return ig_first(p, u) * std::sqrt(u) * ig_second_scaled(p, std::max(t, 0.0));
  };
  FactorPair factors{[p](double u) { return ig_first(p, u); },
                     [p](double t) { return ig_second_scaled(p, t) / std::sqrt(t); }, 1.0 / p.mu};
  return DrawdownDistribution(T, ig_atom0(p, T), 0.0, density, scaled, std::move(factors));
}

DrawdownDistribution drawdown_distribution(const LevyModel& model, double T) {
  if (const auto* p = std::get_if<BrownianParams>(&model)) return brownian_distribution(*p, T);
  if (const auto* p = std::get_if<ExpJumpParams>(&model)) return expjump_distribution(*p, T);
  return ig_distribution(std::get<IGParams>(model), T);
}

}  // namespace levydd
