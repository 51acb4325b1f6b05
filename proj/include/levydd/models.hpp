#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <variant>

namespace levydd {

using Complex = std::complex<double>;

/// dX = mu dt + sigma dW.
struct BrownianParams {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Drift mu minus compound Poisson jumps of rate lambda, Exp(mean xi) sizes.
/// mu <= 0 gives a non-increasing path.
struct ExpJumpParams {
  double mu = 0.0;
  double lambda = 1.0;
  double xi = 1.0;
};

/// Drift mu minus an Inverse Gaussian subordinator with generator
/// alpha (1 - sqrt(1 + 2 beta i u)).
struct IGParams {
  double mu = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
};

using LevyModel = std::variant<BrownianParams, ExpJumpParams, IGParams>;

enum class Family { brownian, expjump, ig };

/// Per-unit-time mean, standard deviation and normalised third cumulant.
struct Cumulants {
  double mu_hat = 0.0;
  double sigma_hat = 1.0;
  double kappa_hat = 0.0;
};

struct WienerHopfPole {
  Complex s;
  Complex u_plus;   // L(u_plus) = s, lower half-plane for Re s > 0
  Complex u_minus;  // upper-half-plane root; NaN for IG
};

/// Throws DomainError if the parameter set violates its invariants.
void validate(const LevyModel& model);
Family family_of(const LevyModel& model);
const char* family_name(Family family);
Family parse_family(const std::string& name);

/// Levy generator L(u) with E[e^{i u X_t}] = e^{L(u) t}. Throws
/// SingularityError at the ExpJump pole u = i/xi and on the IG branch cut
/// [i/(2 beta), i inf).
Complex generator_eval(const LevyModel& model, Complex u);

Cumulants cumulants_of(const LevyModel& model);
LevyModel model_from_cumulants(const Cumulants& target, Family family);

/// Root u_plus of L(u) = s with negative imaginary part. ExpJump and IG need
/// mu > 0; s on the ExpJump slit is rejected with SingularityError.
WienerHopfPole wh_pole(const LevyModel& model, Complex s);

/// Slit of the ExpJump pole in the s-plane:
///   (-(sqrt mu + sqrt(lambda xi))^2 / xi, -(sqrt mu - sqrt(lambda xi))^2 / xi).
std::pair<double, double> expjump_slit(const ExpJumpParams& params);

/// Arguments (a, b) of W shared by both ExpJump factors:
///   a = (sqrt mu - sqrt(lambda xi))^2 / xi, b = (sqrt mu + sqrt(lambda xi))^2 / xi.
std::pair<double, double> expjump_w_args(const ExpJumpParams& params);

// Flat key=value text form. Keys: model, mu, sigma, lambda, xi, alpha, beta
// for native parameters; model (family), mu_hat, sigma_hat, kappa_hat for
// cumulants.
std::string to_key_values(const LevyModel& model);
std::string to_key_values(const Cumulants& cumulants, Family family);
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text);
/// Accepts either form; the cumulant form is converted with
/// model_from_cumulants.
LevyModel model_from_key_values(const KeyValues& kv);

}  // namespace levydd
