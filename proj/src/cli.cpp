#include "qmeasure/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "qmeasure/analysis.hpp"
#include "qmeasure/histories.hpp"
#include "qmeasure/io.hpp"
#include "qmeasure/noise.hpp"
#include "qmeasure/optics.hpp"
#include "qmeasure/stats.hpp"
#include "qmeasure/traces.hpp"

namespace qmeasure::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

constexpr std::uint64_t kDefaultSeed = 0;
constexpr std::size_t kDefaultTheoryDraws = 20000;

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// Resolves a setting as CLI flag > config file > fallback.
class Settings {
 public:
  void load(const std::optional<std::string>& path) {
    if (!path) return;
    file_ = io::read_json_file(*path);
    if (!file_.is_object()) throw ConfigError("config file '" + *path + "' must hold an object");
  }

  template <typename T>
  T pick(const std::optional<T>& flag, const char* key, T fallback) const {
    if (flag) return *flag;
    if (file_.contains(key)) {
      try {
        return file_.at(key).get<T>();
      } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
      }
    }
    return fallback;
  }

  template <typename T>
  std::optional<T> pick_optional(const std::optional<T>& flag, const char* key) const {
    if (flag) return flag;
    if (file_.contains(key)) return pick<T>(std::nullopt, key, T{});
    return std::nullopt;
  }

  std::uint64_t seed(const std::optional<std::uint64_t>& flag) const {
    std::uint64_t fallback = kDefaultSeed;
    if (const char* env = std::getenv("QMEASURE_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        fallback = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError(std::string("QMEASURE_SEED='") + env + "' is not an unsigned integer");
      }
    }
    return pick<std::uint64_t>(flag, "seed", fallback);
  }

 private:
  json file_ = json::object();
};

void write_provenance(const fs::path& dir, const std::string& command, const json& resolved) {
  json record = {{"tool", "qmeasure"},
                 {"command", command},
                 {"config", resolved},
                 {"created_utc", utc_now()}};
  io::write_text_file(dir / "run_config.json", record.dump(2) + "\n");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::set<std::string> split_labels(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

json summary_json(const stats::MeasureDistribution& d) {
  return {{"median", d.median},       {"sigma_plus", d.sigma_plus}, {"sigma_minus", d.sigma_minus},
          {"mean", d.mean},           {"std_dev", d.std_dev},       {"n_samples", d.size()}};
}

std::string histogram_csv(const std::vector<stats::HistogramBin>& bins) {
  std::ostringstream s;
  s << "bin_left,bin_right,count\n" << std::setprecision(17);
  for (const auto& b : bins) s << b.left << ',' << b.right << ',' << b.count << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------

struct MeasureArgs {
  std::optional<std::string> model;
  std::optional<std::string> event;
  std::optional<std::string> out_dir;
};

void cmd_measure(const MeasureArgs& a, const Settings& settings, std::ostream& out) {
  const auto model_path = settings.pick_optional(a.model, "model");
  const HopperModel<double> model = model_path ? io::model_from_json(io::read_json_file(*model_path))
                                               : HopperModel<double>::symmetric(2);
  const auto event_text = settings.pick_optional(a.event, "event");
  if (!event_text) throw ConfigError("--event is required");
  const Event event = Event::parse(*event_text);
  for (const History& h : event) {
    if (h.size() != model.n_steps())
      throw ValidationError("history '" + h.to_string() + "' has " + std::to_string(h.size()) +
                            " sites but the model has " + std::to_string(model.n_steps()) +
                            " steps");
  }
  const double mu = measure(model, event);
  const HistorySpace space = enumerate_histories(model);
  json result = {{"event", io::event_to_json(event)},
                 {"measure", mu},
                 {"serial", is_serial(event, space)},
                 {"model", io::model_to_json(model)}};
  out << "mu(E) = " << format_number(mu) << "\n";
  if (const auto dir = settings.pick_optional(a.out_dir, "out_dir")) {
    ensure_dir(*dir);
    io::write_text_file(fs::path(*dir) / "measure.json", result.dump(2) + "\n");
    write_provenance(*dir, "measure",
                     {{"model", model_path ? json(*model_path) : json("<ideal symmetric>")},
                      {"event", *event_text}});
  }
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::optional<std::string> netlist;
  std::optional<std::string> filter;
  std::optional<std::string> block;
  std::optional<std::size_t> sweep;
  std::optional<std::string> sweep_component;
  std::optional<std::string> out_dir;
};

optics::OpticalCircuit load_circuit(const std::optional<std::string>& netlist,
                                    const std::optional<std::string>& filter) {
  if (netlist && filter) throw ConfigError("--netlist and --filter are mutually exclusive");
  if (netlist) return io::circuit_from_json(io::read_json_file(*netlist));
  if (filter) return optics::build_dsi_filter(io::filter_params_from_json(io::read_json_file(*filter)));
  return optics::build_dsi_filter(optics::FilterParams::ideal());
}

void cmd_simulate(const SimulateArgs& a, const Settings& settings, std::ostream& out) {
  const auto netlist = settings.pick_optional(a.netlist, "netlist");
  const auto filter = settings.pick_optional(a.filter, "filter");
  optics::OpticalCircuit circuit = load_circuit(netlist, filter);
  if (circuit.monitored_ports.empty()) circuit.monitored_ports = circuit.terminal_ports();
  const std::set<std::string> blocked = split_labels(settings.pick<std::string>(a.block, "block", ""));
  const std::size_t sweep = settings.pick<std::size_t>(a.sweep, "sweep", 0);
  const auto dir = settings.pick_optional(a.out_dir, "out_dir");

  json resolved = {{"netlist", netlist ? json(*netlist) : json(nullptr)},
                   {"filter", filter ? json(*filter) : json(nullptr)},
                   {"blocked", blocked},
                   {"sweep", sweep}};

  if (sweep == 0) {
    json powers = json::object();
    for (const auto& [port, p] : optics::port_powers(circuit, blocked)) powers[port] = p;
    out << powers.dump(2) << "\n";
    if (dir) {
      ensure_dir(*dir);
      io::write_text_file(fs::path(*dir) / "ports.json", powers.dump(2) + "\n");
      write_provenance(*dir, "simulate", resolved);
    }
    return;
  }

  const std::string target = settings.pick<std::string>(a.sweep_component, "sweep_component", "");
  optics::PhasePlate* plate = nullptr;
  std::size_t plate_index = 0;
  for (std::size_t i = 0; i < circuit.components.size(); ++i) {
    auto& c = circuit.components[i];
    if (auto* p = std::get_if<optics::PhasePlate>(&c.kind); p && (target.empty() || c.name == target)) {
      plate = p;
      plate_index = i;
      break;
    }
  }
  if (!plate)
    throw ConfigError(target.empty() ? "sweep needs a PhasePlate component in the netlist"
                                     : "no PhasePlate named '" + target + "' in the netlist");
  resolved["sweep_component"] = plate_index;

  std::ostringstream csv;
  csv << "phase";
  for (const auto& port : circuit.monitored_ports) csv << ',' << port;
  csv << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < sweep; ++k) {
    plate->phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(sweep);
    const auto powers = optics::port_powers(circuit, blocked);
    csv << plate->phase;
    for (const auto& port : circuit.monitored_ports) csv << ',' << powers.at(port);
    csv << '\n';
  }
  out << csv.str();
  if (dir) {
    ensure_dir(*dir);
    io::write_text_file(fs::path(*dir) / "sweep.csv", csv.str());
    write_provenance(*dir, "simulate", resolved);
  }
}

// ---------------------------------------------------------------------------

struct NetlistArgs {
  std::optional<std::string> filter;
  bool params_template = false;
};

void cmd_netlist(const NetlistArgs& a, std::ostream& out) {
  if (a.params_template) {
    out << io::filter_params_to_json(optics::FilterParams::ideal()).dump(2) << "\n";
    return;
  }
  const optics::FilterParams params =
      a.filter ? io::filter_params_from_json(io::read_json_file(*a.filter))
               : optics::FilterParams::ideal();
  out << io::circuit_to_json(optics::build_dsi_filter(params)).dump(2) << "\n";
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::optional<std::string> manifest;
  std::optional<double> window_seconds;
  std::optional<std::size_t> resamples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sigma_convention;
  std::optional<std::string> noise;
  std::optional<std::size_t> theory_draws;
  std::optional<std::size_t> bins;
  std::optional<std::string> out_dir;
};

json guarded_significance(const stats::MeasureDistribution& d, double reference,
                          analysis::SigmaConvention convention, json& notes,
                          const std::string& what) {
  try {
    return analysis::significance(d, reference, convention);
  } catch (const DegenerateDataError& e) {
    notes.push_back(what + ": " + e.what());
    return nullptr;
  }
}

void cmd_analyze(const AnalyzeArgs& a, const Settings& settings, std::ostream& out) {
  const auto manifest = settings.pick_optional(a.manifest, "manifest");
  if (!manifest) throw ConfigError("--manifest is required");
  const auto dir = settings.pick_optional(a.out_dir, "out_dir");
  if (!dir) throw ConfigError("--out-dir is required");

  analysis::BootstrapConfig cfg;
  cfg.window_seconds = settings.pick(a.window_seconds, "window_seconds", cfg.window_seconds);
  cfg.n_resamples = settings.pick(a.resamples, "resamples", cfg.n_resamples);
  cfg.rng_seed = settings.seed(a.seed);
  cfg.validate();
  const auto convention = analysis::parse_sigma_convention(
      settings.pick<std::string>(a.sigma_convention, "sigma_convention", "sample-std"));
  const std::size_t theory_draws = settings.pick(a.theory_draws, "theory_draws", kDefaultTheoryDraws);
  const std::size_t bins = settings.pick<std::size_t>(a.bins, "bins", 0);
  const auto noise_path = settings.pick_optional(a.noise, "noise");

  const TraceSet traces = read_manifest(*manifest);
  for (TraceLabel label : kAllTraceLabels) require_trace(traces, label);
  using L = TraceLabel;

  const double eta = analysis::transmittance(traces);
  const auto p = analysis::bootstrap_probability(traces.at(L::P_E), traces.at(L::P_I), cfg);
  const auto mu = analysis::measure_from_probability(analysis::corrected_probability(p, eta));

  analysis::BootstrapConfig phase_cfg = cfg;
  phase_cfg.rng_seed = cfg.rng_seed + 1;
  const auto phase = analysis::phase_distribution(traces.at(L::P_int), traces.at(L::P_01),
                                                  traces.at(L::P_11), phase_cfg);

  analysis::NoiseModel noise;
  if (noise_path) noise = analysis::noise_model_from_json(io::read_json_file(*noise_path));
  else noise.eta_s = analysis::ParamDistribution::fixed(eta);
  const auto theory =
      analysis::theoretical_measure(noise, phase.samples, theory_draws, cfg.rng_seed + 2);

  analysis::BootstrapConfig intensity_cfg = cfg;
  intensity_cfg.rng_seed = cfg.rng_seed + 3;
  const auto intensity = stats::MeasureDistribution::from_samples(analysis::bootstrap_intensity_measure(
      traces.at(L::P_00), traces.at(L::P_01), traces.at(L::P_11), traces.at(L::P_I), eta,
      intensity_cfg));

  json notes = json::array();
  json report = {
      {"median", mu.median},
      {"sigma_plus", mu.sigma_plus},
      {"sigma_minus", mu.sigma_minus},
      {"mean", mu.mean},
      {"std_dev", mu.std_dev},
      {"n_samples", mu.size()},
      {"rejection_fraction", phase.rejection_fraction()},
      {"eta_s", eta},
      {"significance",
       {{"convention", analysis::to_string(convention)},
        {"vs_classical_bound",
         guarded_significance(mu, analysis::kClassicalBound, convention, notes, "vs_classical_bound")},
        {"vs_theory", guarded_significance(mu, theory.median, convention, notes, "vs_theory")}}},
      {"theory", summary_json(theory)},
      {"intensity_measure", summary_json(intensity)},
      {"phase",
       {{"median", stats::median(phase.samples)},
        {"n_accepted", phase.samples.size()},
        {"n_rejected", phase.n_rejected}}},
  };
  report["notes"] = notes;

  ensure_dir(*dir);
  io::write_text_file(fs::path(*dir) / "report.json", report.dump(2) + "\n");
  io::write_text_file(fs::path(*dir) / "histogram.csv",
                      histogram_csv(stats::histogram(mu.samples, bins ? std::optional(bins) : std::nullopt)));
  write_provenance(*dir, "analyze",
                   {{"manifest", *manifest},
                    {"window_seconds", cfg.window_seconds},
                    {"resamples", cfg.n_resamples},
                    {"seed", cfg.rng_seed},
                    {"sigma_convention", analysis::to_string(convention)},
                    {"theory_draws", theory_draws},
                    {"bins", bins},
                    {"noise", analysis::noise_model_to_json(noise)}});

  out << "mu = " << format_number(mu.median) << " +" << format_number(mu.sigma_plus) << " -"
      << format_number(mu.sigma_minus) << "  (theory " << format_number(theory.median) << ")\n";
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::optional<std::string> scenario;
  std::optional<double> mu;
  std::optional<double> eta;
  std::optional<double> noise;
  std::optional<double> drift;
  std::optional<double> phase;
  std::optional<double> phase_jitter;
  std::optional<double> duration;
  std::optional<double> rate;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

analysis::Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  analysis::Scenario s;
  if (doc.contains("filter")) s = analysis::scenario_from_filter(io::filter_params_from_json(doc.at("filter")));
  auto num = [&](const char* key, double& field) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number()) throw ConfigError(std::string("scenario.") + key + " must be a number");
    field = doc.at(key).get<double>();
  };
  num("mu_star", s.mu_star);
  num("eta_s", s.eta_s);
  num("bs1_transmission", s.bs1_transmission);
  num("weight_00", s.weight_00);
  num("weight_01", s.weight_01);
  num("weight_11", s.weight_11);
  num("phase", s.phase);
  num("phase_jitter", s.phase_jitter);
  num("input_power_w", s.input_power_w);
  num("duration_s", s.duration_s);
  num("rate_hz", s.rate_hz);
  num("noise", s.noise);
  num("drift", s.drift);
  if (doc.contains("seed")) s.seed = doc.at("seed").get<std::uint64_t>();
  return s;
}

json scenario_to_json(const analysis::Scenario& s) {
  return {{"mu_star", s.mu_star},         {"eta_s", s.eta_s},
          {"bs1_transmission", s.bs1_transmission},
          {"weight_00", s.weight_00},     {"weight_01", s.weight_01},
          {"weight_11", s.weight_11},     {"phase", s.phase},
          {"phase_jitter", s.phase_jitter}, {"input_power_w", s.input_power_w},
          {"duration_s", s.duration_s},   {"rate_hz", s.rate_hz},
          {"noise", s.noise},             {"drift", s.drift},
          {"seed", s.seed}};
}

void cmd_synth(const SynthArgs& a, const Settings& settings, std::ostream& out) {
  const auto dir = settings.pick_optional(a.out_dir, "out_dir");
  if (!dir) throw ConfigError("--out-dir is required");
  const auto scenario_path = settings.pick_optional(a.scenario, "scenario");
  analysis::Scenario s;
  std::optional<std::uint64_t> scenario_seed;
  if (scenario_path) {
    const json doc = io::read_json_file(*scenario_path);
    s = scenario_from_json(doc);
    if (doc.contains("seed")) scenario_seed = s.seed;
  }
  if (a.mu) s.mu_star = *a.mu;
  if (a.eta) s.eta_s = *a.eta;
  if (a.noise) s.noise = *a.noise;
  if (a.drift) s.drift = *a.drift;
  if (a.phase) s.phase = *a.phase;
  if (a.phase_jitter) s.phase_jitter = *a.phase_jitter;
  if (a.duration) s.duration_s = *a.duration;
  if (a.rate) s.rate_hz = *a.rate;
  s.seed = a.seed ? *a.seed : scenario_seed ? *scenario_seed : settings.seed(std::nullopt);

  const TraceSet traces = analysis::synthesize_traces(s);
  const fs::path manifest = write_trace_set(*dir, traces);
  write_provenance(*dir, "synth", scenario_to_json(s));
  out << manifest.string() << "\n";
}

// ---------------------------------------------------------------------------

struct SignificanceArgs {
  std::optional<std::string> report;
  std::optional<double> median;
  std::optional<double> std_dev;
  std::optional<double> sigma_plus;
  std::optional<double> sigma_minus;
  std::optional<double> reference;
  std::optional<std::string> sigma_convention;
};

void cmd_significance(const SignificanceArgs& a, const Settings& settings, std::ostream& out) {
  analysis::SpreadSummary spread;
  if (const auto report_path = settings.pick_optional(a.report, "report")) {
    const json report = io::read_json_file(*report_path);
    try {
      spread = {report.at("median").get<double>(), report.at("std_dev").get<double>(),
                report.at("sigma_plus").get<double>(), report.at("sigma_minus").get<double>()};
    } catch (const json::exception&) {
      throw ConfigError("report '" + *report_path + "' lacks median/std_dev/sigma_plus/sigma_minus");
    }
  }
  if (a.median) spread.median = *a.median;
  if (a.std_dev) spread.std_dev = *a.std_dev;
  if (a.sigma_plus) spread.sigma_plus = *a.sigma_plus;
  if (a.sigma_minus) spread.sigma_minus = *a.sigma_minus;
  const double reference = settings.pick(a.reference, "reference", analysis::kClassicalBound);
  const auto convention = analysis::parse_sigma_convention(
      settings.pick<std::string>(a.sigma_convention, "sigma_convention", "sample-std"));
  const double z = analysis::significance(spread, reference, convention);
  json result = {{"median", spread.median},
                 {"reference", reference},
                 {"convention", analysis::to_string(convention)},
                 {"significance", z}};
  out << result.dump(2) << "\n";
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  json envelope = {{"error", {{"code", code}, {"message", message}}}};
  err << envelope.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum measure of hopper events: simulation and analysis"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON file of default settings (overridden by flags)");

  MeasureArgs measure_args;
  auto* measure_cmd = app.add_subcommand("measure", "Quantum measure of an event");
  measure_cmd->add_option("--model", measure_args.model, "Hopper model JSON (default: ideal 2-step)");
  measure_cmd->add_option("--event", measure_args.event, "Comma separated histories, e.g. 00,01,11");
  measure_cmd->add_option("--out-dir", measure_args.out_dir, "Directory for measure.json");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Port powers of an optical netlist");
  sim_cmd->add_option("--netlist", sim_args.netlist, "Circuit netlist JSON");
  sim_cmd->add_option("--filter", sim_args.filter, "Event-filter parameter JSON");
  sim_cmd->add_option("--block", sim_args.block, "Comma separated paths to block");
  sim_cmd->add_option("--sweep", sim_args.sweep, "Sweep a phase plate over [0, 2pi) in N steps");
  sim_cmd->add_option("--sweep-component", sim_args.sweep_component, "Name of the swept PhasePlate");
  sim_cmd->add_option("--out-dir", sim_args.out_dir, "Directory for ports.json / sweep.csv");

  NetlistArgs net_args;
  auto* net_cmd = app.add_subcommand("netlist", "Emit the event-filter netlist JSON");
  net_cmd->add_option("--filter", net_args.filter, "Event-filter parameter JSON");
  net_cmd->add_flag("--params-template", net_args.params_template,
                    "Emit ideal filter parameters instead of a netlist");

  AnalyzeArgs an_args;
  auto* an_cmd = app.add_subcommand("analyze", "Measure distribution from recorded traces");
  an_cmd->add_option("--manifest", an_args.manifest, "Trace manifest JSON");
  an_cmd->add_option("--window-seconds", an_args.window_seconds, "Resampling window length");
  an_cmd->add_option("--resamples", an_args.resamples, "Number of bootstrap resamples");
  an_cmd->add_option("--seed", an_args.seed, "Random seed (fallback: QMEASURE_SEED)");
  an_cmd->add_option("--sigma-convention", an_args.sigma_convention,
                     "sample-std | sigma-plus | sigma-minus | side-matched");
  an_cmd->add_option("--noise", an_args.noise, "Noise model JSON for the theory band");
  an_cmd->add_option("--theory-draws", an_args.theory_draws, "Draws for the theory band");
  an_cmd->add_option("--bins", an_args.bins, "Histogram bins (default Freedman-Diaconis)");
  an_cmd->add_option("--out-dir", an_args.out_dir, "Directory for report.json and histogram.csv");

  SynthArgs syn_args;
  auto* syn_cmd = app.add_subcommand("synth", "Write synthetic traces and a manifest");
  syn_cmd->add_option("--scenario", syn_args.scenario, "Scenario JSON");
  syn_cmd->add_option("--mu", syn_args.mu, "Encoded measure");
  syn_cmd->add_option("--eta", syn_args.eta, "BS1 transmittance eta_s");
  syn_cmd->add_option("--noise", syn_args.noise, "Multiplicative noise level");
  syn_cmd->add_option("--drift", syn_args.drift, "Linear drift over the recording");
  syn_cmd->add_option("--phase", syn_args.phase, "Relative phase of 01 and 11");
  syn_cmd->add_option("--phase-jitter", syn_args.phase_jitter, "Per-sample phase jitter");
  syn_cmd->add_option("--duration", syn_args.duration, "Recording length per trace, seconds");
  syn_cmd->add_option("--rate", syn_args.rate, "Sample rate, Hz");
  syn_cmd->add_option("--seed", syn_args.seed, "Random seed (fallback: QMEASURE_SEED)");
  syn_cmd->add_option("--out-dir", syn_args.out_dir, "Output directory");

  SignificanceArgs sig_args;
  auto* sig_cmd = app.add_subcommand("significance", "Distance of a result from a reference");
  sig_cmd->add_option("--report", sig_args.report, "report.json written by analyze");
  sig_cmd->add_option("--median", sig_args.median, "Median");
  sig_cmd->add_option("--std", sig_args.std_dev, "Sample standard deviation");
  sig_cmd->add_option("--sigma-plus", sig_args.sigma_plus, "84.13th percentile minus median");
  sig_cmd->add_option("--sigma-minus", sig_args.sigma_minus, "Median minus 15.87th percentile");
  sig_cmd->add_option("--reference", sig_args.reference, "Reference value (default 1)");
  sig_cmd->add_option("--sigma-convention", sig_args.sigma_convention,
                      "sample-std | sigma-plus | sigma-minus | side-matched");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage_error", e.what());
    return 2;
  }

  try {
    Settings settings;
    settings.load(config_path);
    if (measure_cmd->parsed()) cmd_measure(measure_args, settings, out);
    else if (sim_cmd->parsed()) cmd_simulate(sim_args, settings, out);
    else if (net_cmd->parsed()) cmd_netlist(net_args, out);
    else if (an_cmd->parsed()) cmd_analyze(an_args, settings, out);
    else if (syn_cmd->parsed()) cmd_synth(syn_args, settings, out);
    else if (sig_cmd->parsed()) cmd_significance(sig_args, settings, out);
    return 0;
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
  } catch (const json::exception& e) {
    report_error(err, "parse_error", e.what());
  } catch (const std::exception& e) {
    report_error(err, "internal_error", e.what());
  }
  return 1;
}

}  // namespace qmeasure::cli
