#include "levydd/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>

#include "levydd/drawdown.hpp"
#include "levydd/errors.hpp"

namespace levydd::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw DomainError(std::string(what) + ": not a finite number: '" + text + "'");
  return v;
}

LevyModel with_drift(const LevyModel& model, double mu) {
  LevyModel copy = model;
  std::visit([mu](auto& p) { p.mu = mu; }, copy);
  validate(copy);
  return copy;
}

Json model_json(const LevyModel& model) {
  Json j;
  j["model"] = family_name(family_of(model));
  std::visit(
      [&j](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        j["mu"] = p.mu;
        if constexpr (std::is_same_v<P, BrownianParams>) {
          j["sigma"] = p.sigma;
        } else if constexpr (std::is_same_v<P, ExpJumpParams>) {
          j["lambda"] = p.lambda;
          j["xi"] = p.xi;
        } else {
          j["alpha"] = p.alpha;
          j["beta"] = p.beta;
        }
      },
      model);
  return j;
}

std::vector<double> evaluation_points(const CommandSpec& spec) {
  const double T = spec.horizon_T;
  Grid grid = spec.grid.value_or(Grid{0.0, T, T / 100.0});
  const double slack = 1e-9 * std::max(1.0, T);
  if (grid.start < -slack || grid.stop > T + slack) throw DomainError("grid must lie within [0, T]");
  auto points = expand_grid(grid);
  for (double& t : points) t = std::clamp(t, 0.0, T);
  return points;
}

void write_table(const CommandSpec& spec, std::ostream& out, const char* column,
                 const std::function<double(double)>& value, const DrawdownDistribution& dist) {
  const auto points = evaluation_points(spec);
  if (spec.format == Format::json) {
    Json j;
    j["schema"] = 1;
    j["parameters"] = model_json(spec.model);
    j["T"] = spec.horizon_T;
    j["atom0"] = dist.atom0();
    j["atomT"] = dist.atomT();
    Json rows = Json::array();
    for (double t : points) rows.push_back(Json{{"t", t}, {column, value(t)}});
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
    return;
  }
  out << "t," << column << '\n';
  for (double t : points) out << num(t) << ',' << num(value(t)) << '\n';
  out << "# atom0=" << num(dist.atom0()) << " atomT=" << num(dist.atomT()) << '\n';
}

SimConfig sim_config(const CommandSpec& spec) {
  SimConfig config = spec.sim;
  config.horizon_T = spec.horizon_T;
  return config;
}

Json atom_check(double analytic, std::size_t count, std::size_t n, double allowance, bool& pass) {
  const double freq = static_cast<double>(count) / static_cast<double>(n);
  auto band = binomial_band(analytic, n);
  band.low = std::max(0.0, band.low - allowance);
  band.high = std::min(1.0, band.high + allowance);
  const bool within = freq >= band.low && freq <= band.high;
  pass = pass && within;
  return Json{{"analytic", analytic}, {"count", count},        {"frequency", freq},
              {"band_low", band.low}, {"band_high", band.high}, {"within", within}};
}

}  // namespace

Grid parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw DomainError("grid must be start:stop:step, got '" + text + "'");
  Grid g{parse_number(text.substr(0, first), "grid start"),
         parse_number(text.substr(first + 1, second - first - 1), "grid stop"),
         parse_number(text.substr(second + 1), "grid step")};
  if (!(g.step > 0.0)) throw DomainError("grid step must be positive");
  if (g.stop < g.start) throw DomainError("grid stop must not precede start");
  return g;
}

std::vector<double> expand_grid(const Grid& grid) {
  const double span = (grid.stop - grid.start) / grid.step;
  const double tol = 1e-9 * std::max(1.0, std::abs(span));
  auto count = static_cast<std::size_t>(std::floor(span + tol));
  if (count > 10'000'000) throw DomainError("grid has too many points");
  std::vector<double> points(count + 1);
  for (std::size_t k = 0; k <= count; ++k) points[k] = grid.start + static_cast<double>(k) * grid.step;
  if (std::abs(points.back() - grid.stop) <= 1e-9 * std::max(1.0, std::abs(grid.stop)))
    points.back() = grid.stop;
  return points;
}

int run_density(const CommandSpec& spec, std::ostream& out) {
  const auto dist = drawdown_distribution(spec.model, spec.horizon_T);
  write_table(spec, out, "density", [&dist](double t) { return dist.density_at(t); }, dist);
  return kExitOk;
}

int run_cdf(const CommandSpec& spec, std::ostream& out) {
  const auto dist = drawdown_distribution(spec.model, spec.horizon_T);
  write_table(spec, out, "cdf", [&dist](double t) { return dist.cdf(t); }, dist);
  return kExitOk;
}

int run_atom(const CommandSpec& spec, std::ostream& out) {
  if (std::holds_alternative<BrownianParams>(spec.model)) throw DomainError("atoms are zero for Brownian");
  const auto* jump = std::get_if<ExpJumpParams>(&spec.model);
  if ((spec.approx || spec.mu_sweep) && !jump)
    throw DomainError("--approx and --mu-sweep apply to the expjump model only");
  const double T = spec.horizon_T;
  if (spec.mu_sweep) {
    out << "mu,atom0,atom0_approx\n";
    for (double mu : expand_grid(*spec.mu_sweep)) {
      ExpJumpParams p = *jump;
      p.mu = mu;
      out << num(mu) << ',' << num(expjump_atom0(p, T)) << ',' << num(expjump_atom0_asymptotic(p, T))
          << '\n';
    }
    return kExitOk;
  }
  const auto dist = drawdown_distribution(spec.model, T);
  out << "atom0=" << num(dist.atom0()) << '\n';
  if (dist.atomT() > 0.0) out << "atomT=" << num(dist.atomT()) << '\n';
  if (spec.approx) out << "atom0_approx=" << num(expjump_atom0_asymptotic(*jump, T)) << '\n';
  return kExitOk;
}

int run_convert(const CommandSpec& spec, std::ostream& out) {
  if (spec.cumulant_input)
    out << to_key_values(spec.model);
  else
    out << to_key_values(cumulants_of(spec.model), family_of(spec.model));
  return kExitOk;
}

int run_simulate(const CommandSpec& spec, std::ostream& out) {
  const LevyModel model = spec.sim_mu ? with_drift(spec.model, *spec.sim_mu) : spec.model;
  write_tau_csv(out, simulate(model, sim_config(spec)));
  return kExitOk;
}

int run_validate(const CommandSpec& spec, std::ostream& out) {
  const SimConfig config = sim_config(spec);
  const LevyModel sim_model = spec.sim_mu ? with_drift(spec.model, *spec.sim_mu) : spec.model;
  const bool exact = is_exact_sampler(sim_model);
  // Grid samplers miss maxima between nodes; the exact sampler does not.
  const double allowance = exact ? 0.0 : 0.01;

  const auto dist = drawdown_distribution(spec.model, spec.horizon_T);
  const auto emp = simulate(sim_model, config);
  const std::size_t n = emp.size();

  bool pass = true;
  Json report;
  report["schema"] = 1;
  report["parameters"] = model_json(spec.model);
  report["simulated_parameters"] = model_json(sim_model);
  report["T"] = spec.horizon_T;
  Json sim{{"sampler", exact ? "exact" : "grid"},
           {"paths", config.n_paths},
           {"seed", config.seed},
           {"chunk_size", config.chunk_size},
           {"bin_width", config.bin_width}};
  if (!exact) sim["grid_step"] = config.grid_step;
  report["simulation"] = std::move(sim);

  Json atoms;
  atoms["atom0"] = atom_check(dist.atom0(), emp.atom0_count(), n, allowance, pass);
  atoms["atomT"] = atom_check(dist.atomT(), emp.atomT_count(), n, allowance, pass);
  report["atoms"] = std::move(atoms);

  const double d = ks_distance(emp, dist);
  const double critical = ks_critical_99(n);
  const bool ks_pass = d <= critical + allowance;
  pass = pass && ks_pass;
  report["ks"] = Json{{"distance", d}, {"critical_99", critical}, {"allowance", allowance}, {"pass", ks_pass}};

  const auto hist = histogram_compare(emp, dist);
  const bool bins_pass = hist.within == hist.scored;
  if (exact) pass = pass && bins_pass;
  report["bins"] = Json{{"count", hist.bins.size()},
                        {"scored", hist.scored},
                        {"within_3", hist.within},
                        {"fraction_within", hist.fraction_within},
                        {"max_abs_z", hist.max_abs_z},
                        {"pass", bins_pass},
                        {"counted_in_verdict", exact}};
  report["terminal_mean"] = Json{{"empirical", emp.terminal_mean()},
                                 {"stderr", emp.terminal_stddev() / std::sqrt(static_cast<double>(n))},
                                 {"analytic", cumulants_of(sim_model).mu_hat}};
  report["verdict"] = pass ? "pass" : "fail";
  out << report.dump(2) << '\n';
  return pass ? kExitOk : kExitFail;
}

namespace {

struct ParamFlags {
  std::string model;
  std::string family;
  std::string params_file;
  // key-value name -> raw text from the flag
  std::map<std::string, std::string> values;
};

const char* const kNativeKeys[] = {"mu", "sigma", "lambda", "xi", "alpha", "beta"};
const char* const kCumulantKeys[] = {"mu_hat", "sigma_hat", "kappa_hat"};

void add_param_flags(CLI::App& app, ParamFlags& flags) {
  app.add_option("--model", flags.model, "Model for native parameters")
      ->check(CLI::IsMember({"brownian", "expjump", "ig"}));
  app.add_option("--family", flags.family, "Model family for cumulant parameters")
      ->check(CLI::IsMember({"brownian", "expjump", "ig"}));
  app.add_option("--params", flags.params_file, "File with key=value parameters");
  auto add = [&](const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
  };
  add("mu", "Drift per unit time");
  add("sigma", "Volatility (brownian)");
  add("lambda", "Jump intensity (expjump)");
  add("xi", "Mean jump size (expjump)");
  add("alpha", "IG rate (ig)");
  add("beta", "IG scale (ig)");
  add("mu_hat", "Mean growth rate");
  add("sigma_hat", "Standard deviation per unit time");
  add("kappa_hat", "Normalised third cumulant");
}

KeyValues read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read parameter file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_values(buffer.str());
}

void resolve_model(const ParamFlags& flags, CommandSpec& spec) {
  KeyValues kv;
  if (!flags.params_file.empty()) {
    if (!flags.values.empty() || !flags.model.empty() || !flags.family.empty())
      throw DomainError("--params cannot be combined with parameter flags");
    kv = read_params_file(flags.params_file);
  } else {
    if (!flags.model.empty() && !flags.family.empty() && flags.model != flags.family)
      throw DomainError("--model and --family disagree");
    const std::string family = flags.model.empty() ? flags.family : flags.model;
    if (family.empty()) throw DomainError("select a model with --model or --family");
    kv = flags.values;
    kv["model"] = family;
  }
  bool native = false, cumulant = false;
  for (const char* k : kNativeKeys) native = native || kv.count(k);
  for (const char* k : kCumulantKeys) cumulant = cumulant || kv.count(k);
  if (native == cumulant) throw DomainError("supply exactly one of the native or cumulant parameter groups");
  const Family family = parse_family(kv.at("model"));
  if (native) {
    std::vector<std::string> allowed = {"model", "mu"};
    if (family == Family::brownian) allowed.insert(allowed.end(), {"sigma"});
    if (family == Family::expjump) allowed.insert(allowed.end(), {"lambda", "xi"});
    if (family == Family::ig) allowed.insert(allowed.end(), {"alpha", "beta"});
    for (const auto& [key, value] : kv)
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw DomainError("parameter '" + key + "' does not belong to model " + kv.at("model"));
  }
  spec.cumulant_input = cumulant;
  spec.model = model_from_key_values(kv);
}

struct Invocation {
  CommandSpec spec;
  ParamFlags params;
  std::string grid;
  std::string mu_sweep;
  std::string format = "csv";
  double sim_mu = 0.0;
  std::vector<CLI::Option*> sim_mu_opts;
};

CLI::App* add_subcommand(CLI::App& app, Invocation& inv, Subcommand which, const char* name,
                         const char* help) {
  auto* sub = app.add_subcommand(name, help);
  sub->callback([&inv, which] { inv.spec.subcommand = which; });
  add_param_flags(*sub, inv.params);
  return sub;
}

void add_horizon(CLI::App& sub, Invocation& inv) {
  sub.add_option("-T,--horizon", inv.spec.horizon_T, "Horizon T")->required();
}

void add_output(CLI::App& sub, Invocation& inv) {
  sub.add_option("-o,--output", inv.spec.output_path, "Output file (default: standard output)");
}

void add_sim_flags(CLI::App& sub, Invocation& inv) {
  auto& c = inv.spec.sim;
  sub.add_option("--paths", c.n_paths, "Number of simulated paths")->capture_default_str();
  sub.add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub.add_option("--grid-step", c.grid_step, "Time step of the grid samplers")->capture_default_str();
  sub.add_option("--bin-width", c.bin_width, "Histogram bin width")->capture_default_str();
  sub.add_option("--chunk-size", c.chunk_size, "Paths per RNG stream")->capture_default_str();
  sub.add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Invocation inv;
  CLI::App app{"Drawdown-time distributions for spectrally negative Levy models", "levydd"};
  app.require_subcommand(1);

  auto* density = add_subcommand(app, inv, Subcommand::density, "density", "Tabulate the density");
  auto* cdf = add_subcommand(app, inv, Subcommand::cdf, "cdf", "Tabulate the distribution function");
  auto* atom = add_subcommand(app, inv, Subcommand::atom, "atom", "Probability of ending at the maximum");
  auto* convert = add_subcommand(app, inv, Subcommand::convert, "convert",
                                 "Convert between native and cumulant parameters");
  auto* simulate_cmd = add_subcommand(app, inv, Subcommand::simulate, "simulate", "Write simulated drawdown times");
  auto* validate_cmd =
      add_subcommand(app, inv, Subcommand::validate, "validate", "Compare simulation with the analytic law");

  for (auto* sub : {density, cdf}) {
    add_horizon(*sub, inv);
    sub->add_option("--grid", inv.grid, "Evaluation grid start:stop:step");
    sub->add_option("--format", inv.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    add_output(*sub, inv);
  }
  add_horizon(*atom, inv);
  atom->add_flag("--approx", inv.spec.approx, "Also print the large-drift approximation (expjump)");
  atom->add_option("--mu-sweep", inv.mu_sweep, "Tabulate exact and approximate atoms over mu start:stop:step");
  add_output(*atom, inv);
  add_output(*convert, inv);
  for (auto* sub : {simulate_cmd, validate_cmd}) {
    add_horizon(*sub, inv);
    add_sim_flags(*sub, inv);
    inv.sim_mu_opts.push_back(sub->add_option("--sim-mu", inv.sim_mu, "Simulate with this drift instead"));
    add_output(*sub, inv);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    CommandSpec& spec = inv.spec;
    resolve_model(inv.params, spec);
    if (!std::isfinite(spec.horizon_T) || !(spec.horizon_T > 0.0)) throw DomainError("-T must be positive");
    if (!inv.grid.empty()) spec.grid = parse_grid(inv.grid);
    if (!inv.mu_sweep.empty()) spec.mu_sweep = parse_grid(inv.mu_sweep);
    spec.format = inv.format == "json" ? Format::json : Format::csv;
    for (auto* opt : inv.sim_mu_opts)
      if (opt->count()) spec.sim_mu = inv.sim_mu;

    std::ostringstream buffer;
    int code = kExitOk;
    switch (spec.subcommand) {
      case Subcommand::density: code = run_density(spec, buffer); break;
      case Subcommand::cdf: code = run_cdf(spec, buffer); break;
      case Subcommand::atom: code = run_atom(spec, buffer); break;
      case Subcommand::convert: code = run_convert(spec, buffer); break;
      case Subcommand::simulate: code = run_simulate(spec, buffer); break;
      case Subcommand::validate: code = run_validate(spec, buffer); break;
    }
    if (spec.output_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(spec.output_path, std::ios::binary);
      if (!file) throw IoError("cannot open '" + spec.output_path + "' for writing");
      file << buffer.str();
      file.flush();
      if (!file) throw IoError("failed writing '" + spec.output_path + "'");
    }
    return code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"levydd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace levydd::cli
