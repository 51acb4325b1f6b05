#pragma once

#include <cmath>
#include <random>

namespace levydd {

// Michael-Schucany-Haas: a chi-square(1) draw fixes the smaller root of the
// quadratic, then a coin with bias mean/(mean + x) picks between the roots.
class InverseGaussianSampler {
 public:
  InverseGaussianSampler(double mean, double shape) : mean_(mean), half_ratio_(0.5 * mean / shape) {}

  template <class Engine>
  double operator()(Engine& engine) {
    const double nu = normal_(engine);
    const double a = half_ratio_ * nu * nu;
    // smaller root mean (1 + a - sqrt(a (2 + a))) in cancellation-free form
    const double x = mean_ / (1.0 + a + std::sqrt(a * (2.0 + a)));
    if (uniform_(engine) * (mean_ + x) <= mean_) return x;
    return mean_ * mean_ / x;
  }

 private:
  double mean_;
  double half_ratio_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

}  // namespace levydd
