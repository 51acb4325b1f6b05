#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levydd/models.hpp"
#include "levydd/montecarlo.hpp"

namespace levydd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFail = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// start:stop:step, both ends inclusive to within 1e-9.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};
Grid parse_grid(const std::string& text);
std::vector<double> expand_grid(const Grid& grid);

enum class Subcommand { density, cdf, atom, convert, simulate, validate };
enum class Format { csv, json };

struct CommandSpec {
  Subcommand subcommand = Subcommand::density;
  LevyModel model;
  bool cumulant_input = false;  // parameters arrived as (mu_hat, sigma_hat, kappa_hat)
  double horizon_T = 1.0;
  std::optional<Grid> grid;
  std::string output_path;  // empty: standard output
  Format format = Format::csv;
  bool approx = false;
  std::optional<Grid> mu_sweep;
  SimConfig sim;
  std::optional<double> sim_mu;  // simulate a model with this drift instead
};

// Each writes its result to `out` and returns the exit code.
int run_density(const CommandSpec& spec, std::ostream& out);
int run_cdf(const CommandSpec& spec, std::ostream& out);
int run_atom(const CommandSpec& spec, std::ostream& out);
int run_convert(const CommandSpec& spec, std::ostream& out);
int run_simulate(const CommandSpec& spec, std::ostream& out);
int run_validate(const CommandSpec& spec, std::ostream& out);

/// Full command line (argv[0] included). Honours --output, maps errors to
/// exit codes 2 (usage/parameters), 3 (I/O) and 4 (failed validation).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levydd::cli
