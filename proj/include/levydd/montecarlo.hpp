#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "levydd/detail/inverse_gaussian.hpp"
#include "levydd/drawdown.hpp"
#include "levydd/models.hpp"

namespace levydd {

struct SimConfig {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  double horizon_T = 1.0;
  double grid_step = 1e-3;  // grid samplers only; must divide horizon_T
  double bin_width = 0.1;
  // Paths per RNG stream. Results depend on (seed, chunk_size) but not on
  // the number of threads.
  std::size_t chunk_size = 4096;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Drawdown-time samples in path order, with derived counts.
class EmpiricalDrawdown {
 public:
  EmpiricalDrawdown(double horizon_T, double bin_width, std::vector<double> tau_samples,
                    double terminal_mean, double terminal_stddev);

  double horizon() const { return horizon_T_; }
  double bin_width() const { return bin_width_; }
  const std::vector<double>& tau_samples() const { return tau_; }
  const std::vector<double>& sorted_samples() const { return sorted_; }
  std::size_t size() const { return tau_.size(); }
  std::size_t atom0_count() const { return atom0_count_; }
  std::size_t atomT_count() const { return atomT_count_; }
  /// Every sample lands in exactly one bin; the last bin is closed at T.
  const std::vector<HistogramBin>& histogram() const { return histogram_; }

  /// Fraction of samples <= t, and < t.
  double ecdf(double t) const;
  double ecdf_left(double t) const;

  /// Sample mean and standard deviation of X_T / T over the paths.
  double terminal_mean() const { return terminal_mean_; }
  double terminal_stddev() const { return terminal_stddev_; }

 private:
  double horizon_T_;
  double bin_width_;
  std::vector<double> tau_;
  std::vector<double> sorted_;
  std::size_t atom0_count_ = 0;
  std::size_t atomT_count_ = 0;
  std::vector<HistogramBin> histogram_;
  double terminal_mean_;
  double terminal_stddev_;
};

// Exact: jump times and sizes are drawn directly, no time grid. The path
// rises between jumps, so the maximum sits at T or just before a jump.
EmpiricalDrawdown simulate_expjump(const ExpJumpParams& params, const SimConfig& config);
// Grid samplers: tau = T - (first grid time at which the maximum over the
// grid nodes is attained). A maximum at the last node counts as tau = 0.
EmpiricalDrawdown simulate_brownian(const BrownianParams& params, const SimConfig& config);
EmpiricalDrawdown simulate_ig(const IGParams& params, const SimConfig& config);
EmpiricalDrawdown simulate(const LevyModel& model, const SimConfig& config);
bool is_exact_sampler(const LevyModel& model);

/// sup |ECDF - F| with both sides of every jump compared, including the
/// atoms at 0 and T.
double ks_distance(const EmpiricalDrawdown& empirical, const DrawdownDistribution& analytic);
/// Asymptotic 99% Kolmogorov critical value 1.628 / sqrt(n).
double ks_critical_99(std::size_t n);

struct BinReport {
  double lo = 0.0;
  double hi = 0.0;
  double expected = 0.0;  // continuous mass of the bin, atoms excluded
  double observed = 0.0;  // frequency of samples in the bin, atoms excluded
  double z = 0.0;         // binomial z-score
};

struct HistogramReport {
  std::vector<BinReport> bins;
  std::size_t scored = 0;  // bins whose expected count reaches min_expected_count
  std::size_t within = 0;  // scored bins with |z| < z_limit
  double fraction_within = 0.0;  // within / scored, 1 when nothing is scored
  double max_abs_z = 0.0;  // over scored bins
};

HistogramReport histogram_compare(const EmpiricalDrawdown& empirical,
                                  const DrawdownDistribution& analytic, double z_limit = 3.0,
                                  double min_expected_count = 5.0);

/// p +/- sigmas * sqrt(p (1 - p) / n).
struct BinomialBand {
  double low = 0.0;
  double high = 0.0;
};
BinomialBand binomial_band(double p, std::size_t n, double sigmas = 3.0);

/// One tau per line with 17 significant digits.
void write_tau_csv(std::ostream& out, const EmpiricalDrawdown& empirical);

}  // namespace levydd

