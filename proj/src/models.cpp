#include "levydd/models.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "levydd/errors.hpp"

namespace levydd {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DomainError("missing key '" + key + "'");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    throw DomainError("key '" + key + "' is not a number: " + it->second);
  }
  if (used != it->second.size()) throw DomainError("key '" + key + "' is not a number: " + it->second);
  return v;
}

void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

}  // namespace

void validate(const LevyModel& model) {
  std::visit(Overloaded{
                 [](const BrownianParams& p) {
                   require(std::isfinite(p.mu), "brownian: mu must be finite");
                   require(std::isfinite(p.sigma) && p.sigma > 0.0, "brownian: sigma must be positive");
                 },
                 [](const ExpJumpParams& p) {
                   require(std::isfinite(p.mu), "expjump: mu must be finite");
                   require(std::isfinite(p.lambda) && p.lambda > 0.0, "expjump: lambda must be positive");
                   require(std::isfinite(p.xi) && p.xi > 0.0, "expjump: xi must be positive");
                 },
                 [](const IGParams& p) {
                   require(std::isfinite(p.mu) && p.mu > 0.0, "ig: mu must be positive");
                   require(std::isfinite(p.alpha) && p.alpha > 0.0, "ig: alpha must be positive");
                   require(std::isfinite(p.beta) && p.beta > 0.0, "ig: beta must be positive");
                 },
             },
             model);
}

Family family_of(const LevyModel& model) {
  return static_cast<Family>(model.index());
}

const char* family_name(Family family) {
  switch (family) {
    case Family::brownian: return "brownian";
    case Family::expjump: return "expjump";
    case Family::ig: return "ig";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "brownian") return Family::brownian;
  if (name == "expjump") return Family::expjump;
  if (name == "ig") return Family::ig;
  throw DomainError("unknown model family '" + name + "'");
}

Complex generator_eval(const LevyModel& model, Complex u) {
  validate(model);
  return std::visit(
      Overloaded{
          [u](const BrownianParams& p) -> Complex {
            return kI * p.mu * u - 0.5 * p.sigma * p.sigma * u * u;
          },
          [u](const ExpJumpParams& p) -> Complex {
            const Complex den = 1.0 + kI * p.xi * u;
            if (std::abs(den) <= 1e-15 * (1.0 + std::abs(p.xi * u)))
              throw SingularityError("expjump generator: u is the pole i/xi");
            return kI * p.mu * u - kI * p.lambda * p.xi * u / den;
          },
          [u](const IGParams& p) -> Complex {
            const Complex w = 1.0 + 2.0 * p.beta * kI * u;
            if (w.imag() == 0.0 && w.real() <= 0.0)
              throw SingularityError("ig generator: u lies on the branch cut [i/2beta, i inf)");
            Complex root = std::sqrt(w);
            if (root.real() < 0.0) root = -root;
            return kI * p.mu * u + p.alpha * (1.0 - root);
          },
      },
      model);
}

Cumulants cumulants_of(const LevyModel& model) {
  validate(model);
  return std::visit(Overloaded{
                        [](const BrownianParams& p) { return Cumulants{p.mu, p.sigma, 0.0}; },
                        [](const ExpJumpParams& p) {
                          return Cumulants{p.mu - p.lambda * p.xi,
                                           std::sqrt(2.0 * p.lambda) * p.xi,
                                           -3.0 / std::sqrt(2.0 * p.lambda)};
                        },
                        [](const IGParams& p) {
                          return Cumulants{p.mu - p.alpha * p.beta,
                                           std::sqrt(p.alpha) * p.beta,
                                           -3.0 / std::sqrt(p.alpha)};
                        },
                    },
                    model);
}

LevyModel model_from_cumulants(const Cumulants& target, Family family) {
  require(std::isfinite(target.mu_hat), "cumulants: mu_hat must be finite");
  require(std::isfinite(target.sigma_hat) && target.sigma_hat > 0.0,
          "cumulants: sigma_hat must be positive");
  require(std::isfinite(target.kappa_hat), "cumulants: kappa_hat must be finite");
  const double k = target.kappa_hat;
  switch (family) {
    case Family::brownian:
      require(k == 0.0, "brownian: kappa_hat must be zero");
      return BrownianParams{target.mu_hat, target.sigma_hat};
    case Family::expjump: {
      require(k < 0.0, "expjump: kappa_hat must be negative");
      const double lambda = 4.5 / (k * k);
      const double xi = target.sigma_hat * (-k) / 3.0;
      return ExpJumpParams{target.mu_hat + lambda * xi, lambda, xi};
    }
    case Family::ig: {
      require(k < 0.0, "ig: kappa_hat must be negative");
      const double alpha = 9.0 / (k * k);
      const double beta = target.sigma_hat * (-k) / 3.0;
      const double mu = target.mu_hat + alpha * beta;
      require(mu > 0.0, "ig: cumulants imply a non-positive drift mu");
      return IGParams{mu, alpha, beta};
    }
  }
  throw DomainError("unknown family");
}

std::pair<double, double> expjump_slit(const ExpJumpParams& p) {
  validate(p);
  require(p.mu > 0.0, "expjump slit: mu must be positive");
  const double rm = std::sqrt(p.mu), rj = std::sqrt(p.lambda * p.xi);
  return {-(rm + rj) * (rm + rj) / p.xi, -(rm - rj) * (rm - rj) / p.xi};
}

std::pair<double, double> expjump_w_args(const ExpJumpParams& p) {
  const auto [lo, hi] = expjump_slit(p);
  return {-hi, -lo};
}

WienerHopfPole wh_pole(const LevyModel& model, Complex s) {
  validate(model);
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("wh_pole: s must be finite");
  return std::visit(
      Overloaded{
          [s](const BrownianParams& p) {
            const double v2 = p.sigma * p.sigma;
            const Complex root = std::sqrt(p.mu * p.mu + 2.0 * v2 * s);
            return WienerHopfPole{s, -kI * (root - p.mu) / v2, kI * (root + p.mu) / v2};
          },
          [s](const ExpJumpParams& p) {
            const auto [s1, s2] = expjump_slit(p);
            if (s.imag() == 0.0 && s.real() >= s1 && s.real() <= s2)
              throw SingularityError("wh_pole: s lies on the expjump slit");
            // Product of principal roots: cut exactly on [s1, s2], ~ xi s at infinity.
            const Complex root = p.xi * std::sqrt(s - s1) * std::sqrt(s - s2);
            const Complex base = p.mu - p.lambda * p.xi - p.xi * s;
            const double den = 2.0 * p.mu * p.xi;
            return WienerHopfPole{s, kI * (base - root) / den, kI * (base + root) / den};
          },
          [s](const IGParams& p) {
            const double ab = p.alpha * p.beta;
            const Complex disc = (ab - p.mu) * (ab - p.mu) + 2.0 * p.beta * p.mu * s;
            if (disc.imag() == 0.0 && disc.real() < 0.0)
              throw SingularityError("wh_pole: s lies on the ig branch cut");
            const Complex root = std::sqrt(disc);
            const Complex base = -p.alpha * ab + p.mu * p.alpha - p.mu * s;
            const double den = p.mu * p.mu;
            // The other root of the rationalised quadratic sits on the
            // second sheet of the square root, so it is not reported.
            const double nan = std::numeric_limits<double>::quiet_NaN();
            return WienerHopfPole{s, kI * (base - p.alpha * root) / den, Complex(nan, nan)};
          },
      },
      model);
}

std::string to_key_values(const LevyModel& model) {
  std::ostringstream os;
  os << "model=" << family_name(family_of(model)) << '\n';
  std::visit(Overloaded{
                 [&os](const BrownianParams& p) {
                   os << "mu=" << format_double(p.mu) << "\nsigma=" << format_double(p.sigma) << '\n';
                 },
                 [&os](const ExpJumpParams& p) {
                   os << "mu=" << format_double(p.mu) << "\nlambda=" << format_double(p.lambda)
                      << "\nxi=" << format_double(p.xi) << '\n';
                 },
                 [&os](const IGParams& p) {
                   os << "mu=" << format_double(p.mu) << "\nalpha=" << format_double(p.alpha)
                      << "\nbeta=" << format_double(p.beta) << '\n';
                 },
             },
             model);
  return os.str();
}

std::string to_key_values(const Cumulants& c, Family family) {
  std::ostringstream os;
  os << "model=" << family_name(family) << "\nmu_hat=" << format_double(c.mu_hat)
     << "\nsigma_hat=" << format_double(c.sigma_hat) << "\nkappa_hat=" << format_double(c.kappa_hat)
     << '\n';
  return os.str();
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string token;
  while (is >> token) {
    if (token.front() == '#') {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw DomainError("malformed key=value token '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

LevyModel model_from_key_values(const KeyValues& kv) {
  const auto it = kv.find("model");
  if (it == kv.end()) throw DomainError("missing key 'model'");
  const Family family = parse_family(it->second);
  if (kv.count("mu_hat") || kv.count("sigma_hat") || kv.count("kappa_hat")) {
    return model_from_cumulants(
        {parse_double(kv, "mu_hat"), parse_double(kv, "sigma_hat"), parse_double(kv, "kappa_hat")},
        family);
  }
  LevyModel model;
  switch (family) {
    case Family::brownian: model = BrownianParams{parse_double(kv, "mu"), parse_double(kv, "sigma")}; break;
    case Family::expjump:
      model = ExpJumpParams{parse_double(kv, "mu"), parse_double(kv, "lambda"), parse_double(kv, "xi")};
      break;
    case Family::ig:
      model = IGParams{parse_double(kv, "mu"), parse_double(kv, "alpha"), parse_double(kv, "beta")};
      break;
  }
  validate(model);
  return model;
}

}  // namespace levydd
