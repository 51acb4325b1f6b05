#include "levydd/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "levydd/errors.hpp"

namespace levydd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(splitmix64(seed) ^ splitmix64(chunk + 0x632be59bd9b4e019ULL));
}

// Running mean / M2 of X_T / T for one chunk.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

void check_config(const SimConfig& c) {
  if (c.n_paths < 1) throw DomainError("simulation: n_paths must be at least 1");
  if (c.chunk_size < 1) throw DomainError("simulation: chunk_size must be at least 1");
  if (!std::isfinite(c.horizon_T) || !(c.horizon_T > 0.0))
    throw DomainError("simulation: horizon_T must be positive");
  if (!std::isfinite(c.bin_width) || !(c.bin_width > 0.0))
    throw DomainError("simulation: bin_width must be positive");
}

std::size_t grid_steps(const SimConfig& c) {
  if (!std::isfinite(c.grid_step) || !(c.grid_step > 0.0))
    throw DomainError("simulation: grid_step must be positive");
  const double ratio = c.horizon_T / c.grid_step;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, n))
    throw DomainError("simulation: grid_step must divide horizon_T");
  return static_cast<std::size_t>(n);
}

// PathFn(engine, tau&, terminal&) simulates one path.
template <class PathFn>
EmpiricalDrawdown run_chunks(const SimConfig& config, PathFn path) {
  const std::size_t n = config.n_paths;
  const std::size_t chunks = (n + config.chunk_size - 1) / config.chunk_size;
  std::vector<double> tau(n);
  std::vector<Moments> moments(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        std::mt19937_64 engine(stream_seed(config.seed, c));
        const std::size_t begin = c * config.chunk_size;
        const std::size_t end = std::min(n, begin + config.chunk_size);
        for (std::size_t i = begin; i < end; ++i) {
          double terminal = 0.0;
          tau[i] = path(engine, terminal);
          moments[c].add(terminal / config.horizon_T);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Moments total;
  for (const auto& m : moments) total.merge(m);
  const double sd = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1)) : 0.0;
  return EmpiricalDrawdown(config.horizon_T, config.bin_width, std::move(tau), total.mean, sd);
}

}  // namespace

EmpiricalDrawdown::EmpiricalDrawdown(double horizon_T, double bin_width, std::vector<double> tau_samples,
                                     double terminal_mean, double terminal_stddev)
    : horizon_T_(horizon_T),
      bin_width_(bin_width),
      tau_(std::move(tau_samples)),
      terminal_mean_(terminal_mean),
      terminal_stddev_(terminal_stddev) {
  if (!(horizon_T_ > 0.0) || !(bin_width_ > 0.0)) throw DomainError("empirical: bad horizon or bin width");
  sorted_ = tau_;
  std::sort(sorted_.begin(), sorted_.end());
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(horizon_T_ / bin_width_ - 1e-9)));
  histogram_.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    histogram_[k].lo = static_cast<double>(k) * bin_width_;
    histogram_[k].hi = k + 1 == bins ? horizon_T_ : static_cast<double>(k + 1) * bin_width_;
  }
  for (double t : tau_) {
    if (!(t >= 0.0 && t <= horizon_T_)) throw DomainError("empirical: sample outside [0, T]");
    if (t == 0.0) ++atom0_count_;
    if (t == horizon_T_) ++atomT_count_;
    const auto k = std::min(bins - 1, static_cast<std::size_t>(t / bin_width_));
    ++histogram_[k].count;
  }
}

double EmpiricalDrawdown::ecdf(double t) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDrawdown::ecdf_left(double t) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalDrawdown simulate_expjump(const ExpJumpParams& params, const SimConfig& config) {
  validate(params);
  check_config(config);
  const double T = config.horizon_T;
  const ExpJumpParams p = params;
  return run_chunks(config, [p, T](std::mt19937_64& engine, double& terminal) {
    std::exponential_distribution<double> gap(p.lambda);
    std::exponential_distribution<double> size(1.0 / p.xi);
    double best = 0.0, best_time = 0.0, jumps = 0.0;
    for (double t = gap(engine); t <= T; t += gap(engine)) {
      const double peak = p.mu * t - jumps;
      if (peak > best) {
        best = peak;
        best_time = t;
      }
      jumps += size(engine);
    }
    terminal = p.mu * T - jumps;
    if (terminal > best) best_time = T;
    return best_time == T ? 0.0 : T - best_time;
  });
}

EmpiricalDrawdown simulate_brownian(const BrownianParams& params, const SimConfig& config) {
  validate(params);
  check_config(config);
  const std::size_t steps = grid_steps(config);
  const double T = config.horizon_T;
  const double dt = T / static_cast<double>(steps);
  const double drift = params.mu * dt, scale = params.sigma * std::sqrt(dt);
  return run_chunks(config, [=](std::mt19937_64& engine, double& terminal) {
    std::normal_distribution<double> normal;
    double x = 0.0, best = 0.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
      x += drift + scale * normal(engine);
      if (x > best) {
        best = x;
        best_k = k;
      }
    }
    terminal = x;
    return best_k == steps ? 0.0 : T - static_cast<double>(best_k) * dt;
  });
}

EmpiricalDrawdown simulate_ig(const IGParams& params, const SimConfig& config) {
  validate(params);
  check_config(config);
  const std::size_t steps = grid_steps(config);
  const double T = config.horizon_T;
  const double dt = T / static_cast<double>(steps);
  // Subordinator increment over dt: IG with mean alpha beta dt, shape alpha^2 beta dt^2.
  const double mean = params.alpha * params.beta * dt;
  const double shape = params.alpha * params.alpha * params.beta * dt * dt;
  const double drift = params.mu * dt;
  return run_chunks(config, [=](std::mt19937_64& engine, double& terminal) {
    InverseGaussianSampler increment(mean, shape);
    double x = 0.0, best = 0.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
      x += drift - increment(engine);
      if (x > best) {
        best = x;
        best_k = k;
      }
    }
    terminal = x;
    return best_k == steps ? 0.0 : T - static_cast<double>(best_k) * dt;
  });
}

EmpiricalDrawdown simulate(const LevyModel& model, const SimConfig& config) {
  if (const auto* p = std::get_if<BrownianParams>(&model)) return simulate_brownian(*p, config);
  if (const auto* p = std::get_if<ExpJumpParams>(&model)) return simulate_expjump(*p, config);
  return simulate_ig(std::get<IGParams>(model), config);
}

bool is_exact_sampler(const LevyModel& model) { return std::holds_alternative<ExpJumpParams>(model); }

double ks_distance(const EmpiricalDrawdown& empirical, const DrawdownDistribution& analytic) {
  const double T = analytic.horizon();
  if (std::abs(empirical.horizon() - T) > 1e-12 * T) throw DomainError("ks_distance: horizon mismatch");
  const auto& xs = empirical.sorted_samples();
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) throw DomainError("ks_distance: no samples");

  // Both one-sided limits at the atoms, even where no sample sits.
  double d = std::abs(empirical.ecdf(0.0) - analytic.atom0());
  d = std::max(d, std::abs(empirical.ecdf_left(T) - (1.0 - analytic.atomT())));

  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double v = xs[i];
    const double left_emp = static_cast<double>(i) / n, right_emp = static_cast<double>(j) / n;
    const double at = analytic.cdf(v);
    const double left_model = v == 0.0 ? 0.0 : at;
    const double right_model = v == T ? 1.0 : at;
    d = std::max({d, std::abs(left_emp - left_model), std::abs(right_emp - right_model)});
    i = j;
  }
  return d;
}

double ks_critical_99(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

HistogramReport histogram_compare(const EmpiricalDrawdown& empirical, const DrawdownDistribution& analytic,
                                  double z_limit, double min_expected_count) {
  const double T = analytic.horizon();
  if (std::abs(empirical.horizon() - T) > 1e-12 * T) throw DomainError("histogram_compare: horizon mismatch");
  const double n = static_cast<double>(empirical.size());
  const auto& hist = empirical.histogram();
  HistogramReport report;
  report.bins.reserve(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k) {
    BinReport bin;
    bin.lo = hist[k].lo;
    bin.hi = hist[k].hi;
    bin.expected = std::max(0.0, analytic.cdf(bin.hi) - analytic.cdf(bin.lo));
    double count = static_cast<double>(hist[k].count);
    if (k == 0) count -= static_cast<double>(empirical.atom0_count());
    if (k + 1 == hist.size()) count -= static_cast<double>(empirical.atomT_count());
    bin.observed = count / n;
    const double var = bin.expected * (1.0 - bin.expected) / n;
    if (var > 0.0)
      bin.z = (bin.observed - bin.expected) / std::sqrt(var);
    else
      bin.z = bin.observed == bin.expected ? 0.0 : HUGE_VAL;
    // The normal approximation to the bin count is poor for sparse bins.
    if (n * bin.expected >= min_expected_count) {
      ++report.scored;
      if (std::abs(bin.z) < z_limit) ++report.within;
      report.max_abs_z = std::max(report.max_abs_z, std::abs(bin.z));
    }
    report.bins.push_back(bin);
  }
  report.fraction_within =
      report.scored == 0 ? 1.0 : static_cast<double>(report.within) / static_cast<double>(report.scored);
  return report;
}

BinomialBand binomial_band(double p, std::size_t n, double sigmas) {
  const double half = sigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {p - half, p + half};
}

void write_tau_csv(std::ostream& out, const EmpiricalDrawdown& empirical) {
  char buf[40];
  for (double t : empirical.tau_samples()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", t);
    out << buf;
  }
}

}  // namespace levydd
