#include "sampcap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sampcap/aliasing.hpp"
#include "sampcap/error.hpp"
#include "sampcap/io.hpp"
#include "sampcap/oracle.hpp"
#include "sampcap/support.hpp"
#include "sampcap/systems.hpp"
#include "sampcap/waterfill.hpp"

namespace sampcap::cli {

namespace {

struct RunConfig {
  std::string channel;
  std::string system;
  std::string set;
  double rate = 0.0;
  double rate_min = 0.0;
  double rate_max = 0.0;
  int steps = 0;
  double power = 1.0;
  int grid = 4096;
  int aliases = -1;
  int periods = 32;
  std::string out;
  std::string format;  // empty: the subcommand default
  bool bits = false;
  std::uint64_t seed = 0;
  double fq = 0.0;
  std::optional<double> sample_rate;
  double jitter = 0.0;
  std::optional<double> window_length;
  double tolerance = 1e-9;
  int max_iterations = 200;
};

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  ok\n"
    "  2  validation error (bad input, missing file, bad flag, domain)\n"
    "  3  numeric nonconvergence\n"
    "  4  infeasible design\n"
    "  5  no usable spectrum\n"
    "  6  alias window too small\n"
    "  7  degenerate sampler\n"
    "  8  singular noise covariance";

// Formats a double with round-trip precision for CSV output.
std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Json grid_json(const Grid& g) {
  return Json{{"window", {g.window().lo, g.window().hi}},
              {"n_bins", g.nominal_bins()},
              {"bins", g.size()},
              {"max_width", g.max_width()}};
}

WaterfillOptions options(const RunConfig& cfg) {
  WaterfillOptions o;
  o.relative_tolerance = cfg.tolerance;
  o.max_iterations = cfg.max_iterations;
  return o;
}

void add_capacity(Json& j, const RunConfig& cfg, double nats, const char* key = "capacity") {
  j[std::string(key) + "_nats"] = nats;
  if (cfg.bits) j[std::string(key) + "_bits"] = nats_to_bits(nats);
}

SnrDensity load_channel(const RunConfig& cfg) {
  if (cfg.channel.empty()) fail(ErrorKind::validation, "--channel: required");
  return parse_channel_spec(read_json_file(cfg.channel));
}

PeriodicSamplingSystem load_system(const RunConfig& cfg) {
  if (cfg.system.empty()) fail(ErrorKind::validation, "--system: required");
  return parse_system_spec(read_json_file(cfg.system));
}

std::string allocation_csv(const WaterfillSolution& w, bool modes) {
  std::ostringstream os;
  os << (modes ? "f_center,mode,gain,power_density\n" : "f_center,gamma,power_density\n");
  for (const Allocation& a : w.allocation) {
    os << num(a.frequency) << ',';
    if (modes) os << a.mode << ',';
    os << num(a.gain) << ',' << num(a.power_density) << '\n';
  }
  return os.str();
}

struct Output {
  Json json;
  std::string csv;
};

Output cmd_capacity_bound(const RunConfig& cfg) {
  const SnrDensity s = load_channel(cfg);
  const Grid g = make_grid(s, static_cast<std::size_t>(cfg.grid));
  const CapacityBound cb = capacity_upper_bound(s, cfg.rate, cfg.power, g, options(cfg));
  Json j{{"command", "capacity-bound"}, {"f_s", cfg.rate}, {"power", cfg.power}};
  add_capacity(j, cfg, cb.waterfill.capacity_nats);
  j["nu"] = cb.waterfill.nu;
  j["total_power"] = cb.waterfill.total_power;
  j["set"] = to_json(cb.support.set);
  j["measure"] = cb.support.set.measure();
  j["threshold"] = cb.support.threshold;
  j["iterations"] = cb.waterfill.iterations;
  j["grid"] = grid_json(g);
  return {std::move(j), allocation_csv(cb.waterfill, false)};
}

Output cmd_support(const RunConfig& cfg) {
  const SnrDensity s = load_channel(cfg);
  const Grid g = make_grid(s, static_cast<std::size_t>(cfg.grid));
  const SupportSolution sol = select_support(s, cfg.rate, g);
  Json j{{"command", "support"},
         {"f_s", cfg.rate},
         {"set", to_json(sol.set)},
         {"measure", sol.set.measure()},
         {"threshold", sol.threshold},
         {"captured_snr", sol.captured_snr},
         {"grid", grid_json(g)}};
  std::ostringstream csv;
  csv << "lo,hi\n";
  for (const Interval& iv : sol.set.intervals()) csv << num(iv.lo) << ',' << num(iv.hi) << '\n';
  return {std::move(j), csv.str()};
}

Output cmd_periodic(const RunConfig& cfg) {
  const SnrDensity s = load_channel(cfg);
  const PeriodicSamplingSystem sys = load_system(cfg);
  const Grid g = make_alias_grid(sys, s, static_cast<std::size_t>(cfg.grid));
  const PeriodicCapacity pc = periodic_capacity(sys, s, cfg.power, g, cfg.aliases, options(cfg));
  Json j{{"command", "periodic"}, {"f_s", sys.rate()}, {"T_q", sys.period()}, {"power", cfg.power}};
  add_capacity(j, cfg, pc.solution.capacity_nats);
  j["nu"] = pc.solution.nu;
  j["total_power"] = pc.solution.total_power;
  j["alias_halfwidth"] = pc.alias_halfwidth;
  j["samples_per_period"] = sys.samples_per_period();
  j["grid"] = grid_json(g);
  std::ostringstream csv;
  csv << 'f';
  for (std::size_t k = 0; k < sys.samples_per_period(); ++k) csv << ",lambda_" << k + 1;
  csv << '\n';
  for (std::size_t i = 0; i < pc.frequencies.size(); ++i) {
    csv << num(pc.frequencies[i]);
    for (double lam : pc.eigenvalues[i]) csv << ',' << num(lam);
    csv << '\n';
  }
  return {std::move(j), csv.str()};
}

Output cmd_filterbank(const RunConfig& cfg) {
  const SnrDensity s = load_channel(cfg);
  const Grid g = make_grid(s, static_cast<std::size_t>(cfg.grid));
  const CapacityBound cb = capacity_upper_bound(s, cfg.rate, cfg.power, g, options(cfg));
  const FilterBankDesign fb = build_filterbank(cb.support);
  const Grid ag = make_alias_grid(fb.system, s, static_cast<std::size_t>(cfg.grid));
  const PeriodicCapacity pc =
      periodic_capacity(fb.system, s, cfg.power, ag, cfg.aliases, options(cfg));
  Json branches = Json::array();
  for (const FilterBankBranch& b : fb.branches)
    branches.push_back({{"band", {b.band.lo, b.band.hi}},
                        {"rate", b.rate},
                        {"sampled_rate", b.sampled_rate}});
  Json j{{"command", "filterbank"}, {"f_s", cfg.rate}, {"power", cfg.power}};
  add_capacity(j, cfg, pc.solution.capacity_nats);
  add_capacity(j, cfg, cb.waterfill.capacity_nats, "upper_bound");
  j["gap_nats"] = cb.waterfill.capacity_nats - pc.solution.capacity_nats;
  j["total_rate"] = fb.total_rate;
  j["denominator"] = fb.denominator;
  j["branches"] = std::move(branches);
  j["system"] = to_json(fb.system);
  j["grid"] = grid_json(g);
  return {std::move(j), allocation_csv(pc.solution, true)};
}

Output cmd_single_branch(const RunConfig& cfg) {
  const SnrDensity s = load_channel(cfg);
  if (!(cfg.fq > 0.0)) fail(ErrorKind::validation, "--fq: required and must be positive");
  const Grid g = make_grid(s, static_cast<std::size_t>(cfg.grid));
  const CapacityBound cb = capacity_upper_bound(s, cfg.rate, cfg.power, g, options(cfg));
  const SingleBranchDesign d = build_single_branch(cb.support, cfg.fq, cfg.sample_rate);
  const Grid ag = make_alias_grid(d.system, s, static_cast<std::size_t>(cfg.grid));
  const PeriodicCapacity pc =
      periodic_capacity(d.system, s, cfg.power, ag, cfg.aliases, options(cfg));
  Json coeffs = Json::object();
  for (const auto& [m, c] : d.coeffs) coeffs[std::to_string(m)] = {c.real(), c.imag()};
  Json j{{"command", "single-branch"}, {"f_s", cfg.rate}, {"power", cfg.power}};
  add_capacity(j, cfg, pc.solution.capacity_nats);
  add_capacity(j, cfg, cb.waterfill.capacity_nats, "upper_bound");
  j["gap_nats"] = cb.waterfill.capacity_nats - pc.solution.capacity_nats;
  j["modulation_rate"] = d.modulation_rate;
  j["sample_rate"] = d.sample_rate;
  j["band"] = to_json(d.band);
  j["baseband"] = {d.baseband.lo, d.baseband.hi};
  j["coeffs"] = std::move(coeffs);
  j["snapped"] = d.snapped;
  j["alias_free"] = d.alias_free;
  j["warnings"] = d.warnings;
  j["system"] = to_json(d.system);
  j["grid"] = grid_json(g);
  return {std::move(j), allocation_csv(pc.solution, true)};
}

Output cmd_oracle(const RunConfig& cfg) {
  const SnrDensity s = load_channel(cfg);
  const PeriodicSamplingSystem sys = load_system(cfg);
  if (cfg.periods < 1) fail(ErrorKind::validation, "--periods: must be at least 1");
  const auto periods = static_cast<std::size_t>(cfg.periods);
  Json j{{"command", "oracle"}, {"f_s", sys.rate()}, {"power", cfg.power}, {"periods", periods}};
  BlockModel m;
  if (cfg.jitter != 0.0) {
    if (!(cfg.jitter > 0.0)) fail(ErrorKind::validation, "--jitter: must be non-negative");
    const std::size_t n = periods * sys.samples_per_period();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> delta(n);
    for (double& d : delta) d = cfg.jitter * u(rng) / sys.rate();
    m = build_block_model(sys, s, periods, 0, delta);
    const KadecReport kr =
        kadec_check(SamplingSet::finite(m.sample_times, {m.sample_times.front(),
                                                         m.sample_times.back()}),
                    sys.rate());
    j["jitter"] = cfg.jitter;
    j["seed"] = cfg.seed;
    j["kadec"] = {{"ok", kr.ok}, {"max_deviation", kr.max_deviation}};
  } else {
    m = build_block_model(sys, s, periods);
  }
  add_capacity(j, cfg, block_capacity(m, cfg.power));
  j["block_duration"] = m.block_duration;
  j["tones"] = m.tones.size();
  j["samples"] = m.sample_times.size();
  std::ostringstream csv;
  csv << "index,gain\n";
  const auto gains = whitened_gains(m);
  for (std::size_t i = 0; i < gains.size(); ++i) csv << i << ',' << num(gains[i]) << '\n';
  return {std::move(j), csv.str()};
}

Output cmd_sweep(const RunConfig& cfg) {
  if (cfg.steps < 2) fail(ErrorKind::validation, "--steps: must be at least 2");
  if (!(cfg.rate_min > 0.0)) fail(ErrorKind::validation, "--rate-min: rate must be positive");
  if (!(cfg.rate_max >= cfg.rate_min))
    fail(ErrorKind::validation, "--rate-max: must not be below --rate-min");
  const SnrDensity s = load_channel(cfg);
  const Grid g = make_grid(s, static_cast<std::size_t>(cfg.grid));
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "f_s,capacity_nats,nu,measure\n";
  for (int i = 0; i < cfg.steps; ++i) {
    const double fs = i + 1 == cfg.steps
                          ? cfg.rate_max
                          : cfg.rate_min + (cfg.rate_max - cfg.rate_min) * i / (cfg.steps - 1);
    const CapacityBound cb = capacity_upper_bound(s, fs, cfg.power, g, options(cfg));
    const double mu = cb.support.set.measure();
    csv << num(fs) << ',' << num(cb.waterfill.capacity_nats) << ',' << num(cb.waterfill.nu)
        << ',' << num(mu) << '\n';
    Json row{{"f_s", fs}};
    add_capacity(row, cfg, cb.waterfill.capacity_nats);
    row["nu"] = cb.waterfill.nu;
    row["measure"] = mu;
    rows.push_back(std::move(row));
  }
  Json j{{"command", "sweep"}, {"power", cfg.power}, {"rows", std::move(rows)},
         {"grid", grid_json(g)}};
  return {std::move(j), csv.str()};
}

Output cmd_density(const RunConfig& cfg) {
  if (cfg.set.empty()) fail(ErrorKind::validation, "--set: required");
  const SamplingSetDoc doc = parse_sampling_set(read_json_file(cfg.set));
  const std::optional<double> r = cfg.window_length ? cfg.window_length : doc.window_length;
  const DensityReport d = beurling_density(doc.set, r);
  Json j{{"command", "density"}, {"upper", d.upper}, {"lower", d.lower}};
  j["uniform"] = d.uniform ? Json(*d.uniform) : Json(nullptr);
  j["estimated"] = d.estimated;
  if (r) j["r"] = *r;
  std::ostringstream csv;
  csv << "upper,lower\n" << num(d.upper) << ',' << num(d.lower) << '\n';
  return {std::move(j), csv.str()};
}

void emit(const Output& o, const RunConfig& cfg, std::ostream& out) {
  const std::string text = cfg.format == "csv" ? o.csv : o.json.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) fail(ErrorKind::validation, "--out: cannot write '" + cfg.out + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Capacity of Gaussian channels under sub-Nyquist sampling"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  auto output_flags = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--out", cfg.out, "Write the report to this file instead of stdout");
    sub->add_option("--format", cfg.format, "Report format (default " + default_format + ")")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--bits", cfg.bits, "Also report capacities in bits");
  };
  auto numeric_flags = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "Quadrature bins")
        ->check(CLI::Range(16, 1 << 24))
        ->capture_default_str();
    sub->add_option("--tol", cfg.tolerance, "Water-fill budget tolerance (relative)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iterations, "Water-fill bisection cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  struct Handler {
    std::function<Output(const RunConfig&)> run;
    std::string format;
  };
  std::map<CLI::App*, Handler> handlers;
  auto command = [&](const char* name, const char* desc, std::function<Output(const RunConfig&)> h,
                     const std::string& default_format = "json") {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->footer(kExitCodes);
    handlers[sub] = {std::move(h), default_format};
    return std::pair{sub, default_format};
  };

  {
    auto [sub, fmt] = command("capacity-bound", "Upper bound C_u at rate f_s", cmd_capacity_bound);
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--rate", cfg.rate, "Sampling rate f_s")->required();
    sub->add_option("--power", cfg.power, "Power budget P")->capture_default_str();
    numeric_flags(sub);
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("support", "SNR-maximizing frequency set of measure f_s", cmd_support);
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--rate", cfg.rate, "Sampling rate f_s")->required();
    numeric_flags(sub);
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("periodic", "Capacity of a periodic sampling system", cmd_periodic);
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--system", cfg.system, "System spec (JSON)")->required();
    sub->add_option("--power", cfg.power, "Power budget P")->capture_default_str();
    sub->add_option("--aliases", cfg.aliases, "Alias half-width L (default: auto)");
    numeric_flags(sub);
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("filterbank", "Filter-bank sampler on the optimal support",
                              cmd_filterbank);
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--rate", cfg.rate, "Sampling rate f_s")->required();
    sub->add_option("--power", cfg.power, "Power budget P")->capture_default_str();
    sub->add_option("--aliases", cfg.aliases, "Alias half-width L (default: auto)");
    numeric_flags(sub);
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("single-branch", "Modulation-based single-branch sampler",
                              cmd_single_branch);
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--rate", cfg.rate, "Sampling rate f_s")->required();
    sub->add_option("--fq", cfg.fq, "Modulation rate f_q")->required();
    sub->add_option("--sample-rate", cfg.sample_rate, "Sampler rate (multiple of f_q)");
    sub->add_option("--power", cfg.power, "Power budget P")->capture_default_str();
    sub->add_option("--aliases", cfg.aliases, "Alias half-width L (default: auto)");
    numeric_flags(sub);
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("oracle", "Finite-block capacity of a periodic system", cmd_oracle);
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--system", cfg.system, "System spec (JSON)")->required();
    sub->add_option("--power", cfg.power, "Power budget P")->capture_default_str();
    sub->add_option("--periods", cfg.periods, "Periods per block N_p")->capture_default_str();
    sub->add_option("--jitter", cfg.jitter,
                    "Uniform timing perturbation amplitude, in units of 1/f_s");
    sub->add_option("--seed", cfg.seed, "Seed for the perturbation")->capture_default_str();
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("sweep", "C_u over a range of sampling rates", cmd_sweep, "csv");
    sub->add_option("--channel", cfg.channel, "Channel spec (JSON)")->required();
    sub->add_option("--rate-min", cfg.rate_min, "First rate")->required();
    sub->add_option("--rate-max", cfg.rate_max, "Last rate")->required();
    sub->add_option("--steps", cfg.steps, "Number of rates (>= 2)")->required();
    sub->add_option("--power", cfg.power, "Power budget P")->capture_default_str();
    numeric_flags(sub);
    output_flags(sub, fmt);
  }
  {
    auto [sub, fmt] = command("density", "Beurling density of a sampling set", cmd_density);
    sub->add_option("--set", cfg.set, "Sampling-set document (JSON)")->required();
    sub->add_option("--window", cfg.window_length, "Scan window length for finite sets");
    output_flags(sub, fmt);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code(ErrorKind::validation);
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const Handler& h = handlers.at(chosen);
    if (cfg.format.empty()) cfg.format = h.format;
    const Output o = h.run(cfg);
    emit(o, cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::validation);
  }
  return 0;
}

}  // namespace sampcap::cli
