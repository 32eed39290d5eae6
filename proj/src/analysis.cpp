#include "qmeasure/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qmeasure/errors.hpp"

namespace qmeasure::analysis {

namespace {

// Slack on the interference criterion for operands that sit on the
// constructive or destructive limit up to rounding.
constexpr double kCosineSlack = 8 * std::numeric_limits<double>::epsilon();

// A spread this small relative to the median is rounding in the window
// averages, not data.
constexpr double kDegenerateSpread = 1e-12;

void require_window_fits(const PowerTrace& trace, double window_seconds) {
  if (!(window_seconds < trace.duration()))
    throw InputError("window of " + std::to_string(window_seconds) + " s does not fit trace " +
                     to_string(trace.label()) + " lasting " + std::to_string(trace.duration()) +
                     " s");
}

void require_eta(double eta_s) {
  if (!(eta_s > 0.0 && eta_s <= 1.0))
    throw InputError("eta_s must lie in (0, 1], got " + std::to_string(eta_s));
}

}  // namespace

void BootstrapConfig::validate() const {
  if (!(window_seconds > 0.0) || !std::isfinite(window_seconds))
    throw ConfigError("window_seconds must be positive");
  if (n_resamples == 0) throw ConfigError("n_resamples must be positive");
}

double transmittance(double p_input, double p_transmitted, double p_reflected) {
  if (!(p_input > 0.0)) throw InputError("P_I must be positive");
  if (p_transmitted < 0.0 || p_reflected < 0.0) throw InputError("powers must be nonnegative");
  return (p_transmitted + p_reflected) / p_input;
}

double transmittance(const TraceSet& traces) {
  return transmittance(require_trace(traces, TraceLabel::P_I).mean_power(),
                       require_trace(traces, TraceLabel::P_T).mean_power(),
                       require_trace(traces, TraceLabel::P_R).mean_power());
}

double random_window_mean(const PowerTrace& trace, double window_seconds, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> start(trace.start_time(),
                                               trace.end_time() - window_seconds);
  const auto m = trace.window_mean(start(rng), window_seconds);
  if (!m) throw InputError("empty resampling window in trace " + to_string(trace.label()));
  return *m;
}

std::vector<double> bootstrap_probability(const PowerTrace& trace_e, const PowerTrace& trace_i,
                                          const BootstrapConfig& cfg) {
  cfg.validate();
  require_window_fits(trace_e, cfg.window_seconds);
  require_window_fits(trace_i, cfg.window_seconds);
  std::vector<double> ratios(cfg.n_resamples);
  stats::parallel_for(cfg.n_resamples, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      auto rng = stats::substream(cfg.rng_seed, k);
      const double e = random_window_mean(trace_e, cfg.window_seconds, rng);
      const double i = random_window_mean(trace_i, cfg.window_seconds, rng);
      if (!(i > 0.0)) throw InputError("input power window averages to zero");
      ratios[k] = e / i;
    }
  });
  return ratios;
}

std::vector<double> corrected_probability(std::span<const double> p, double eta_s) {
  require_eta(eta_s);
  const double scale = 1.0 / (eta_s * eta_s);
  std::vector<double> out(p.begin(), p.end());
  for (double& x : out) x *= scale;
  return out;
}

MeasureDistribution measure_from_probability(std::span<const double> p_corrected) {
  std::vector<double> mu(p_corrected.begin(), p_corrected.end());
  for (double& x : mu) x *= kFilterLossFactor;
  return MeasureDistribution::from_samples(std::move(mu));
}

std::optional<double> extract_phase(double i_phi, double i1, double i2) {
  if (!(i1 > 0.0) || !(i2 > 0.0)) throw InputError("I_1 and I_2 must be positive");
  const double cosine = (i_phi - i1 - i2) / (2.0 * std::sqrt(i1 * i2));
  if (!std::isfinite(cosine) || std::abs(cosine) > 1.0 + kCosineSlack) return std::nullopt;
  // acos has infinite slope at +-1, so rounding there would surface as a
  // phase of order 1e-8.
  if (std::abs(cosine) >= 1.0 - kCosineSlack) return cosine > 0.0 ? 0.0 : std::numbers::pi;
  return std::acos(cosine);
}

PhaseDistribution phase_distribution(const PowerTrace& p_int, const PowerTrace& p_01,
                                     const PowerTrace& p_11, const BootstrapConfig& cfg,
                                     double max_rejection) {
  cfg.validate();
  for (const PowerTrace* t : {&p_int, &p_01, &p_11}) require_window_fits(*t, cfg.window_seconds);
  constexpr double kRejected = -1.0;
  std::vector<double> phases(cfg.n_resamples, kRejected);
  stats::parallel_for(cfg.n_resamples, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      auto rng = stats::substream(cfg.rng_seed, k);
      const double i_phi = random_window_mean(p_int, cfg.window_seconds, rng);
      const double i1 = random_window_mean(p_01, cfg.window_seconds, rng);
      const double i2 = random_window_mean(p_11, cfg.window_seconds, rng);
      if (!(i1 > 0.0) || !(i2 > 0.0))
        throw DegenerateDataError("single-branch power window averages to zero");
      if (const auto phi = extract_phase(i_phi, i1, i2)) phases[k] = *phi;
    }
  });

  PhaseDistribution out;
  out.n_drawn = cfg.n_resamples;
  for (double phi : phases) {
    if (phi == kRejected) ++out.n_rejected;
    else out.samples.push_back(phi);
  }
  if (out.samples.empty())
    throw DegenerateDataError("every phase sample violates the interference criterion");
  if (out.rejection_fraction() > max_rejection)
    throw DataQualityError("phase rejection fraction " + std::to_string(out.rejection_fraction()) +
                           " exceeds " + std::to_string(max_rejection));
  return out;
}

double intensity_measure(double p_00, double p_01, double p_11, double p_input, double eta_s) {
  if (!(p_input > 0.0)) throw InputError("P_I must be positive");
  if (p_00 < 0.0 || p_01 < 0.0 || p_11 < 0.0) throw InputError("powers must be nonnegative");
  require_eta(eta_s);
  const double scale = 2.0 / (eta_s * eta_s) / p_input;
  const double i00 = scale * p_00;
  const double i01 = scale * p_01;
  const double i11 = scale * p_11;
  return i00 + i01 + i11 + 2.0 * std::sqrt(i01 * i11);
}

std::vector<double> bootstrap_intensity_measure(const PowerTrace& p_00, const PowerTrace& p_01,
                                                const PowerTrace& p_11, const PowerTrace& p_input,
                                                double eta_s, const BootstrapConfig& cfg) {
  cfg.validate();
  require_eta(eta_s);
  for (const PowerTrace* t : {&p_00, &p_01, &p_11, &p_input})
    require_window_fits(*t, cfg.window_seconds);
  std::vector<double> out(cfg.n_resamples);
  stats::parallel_for(cfg.n_resamples, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      auto rng = stats::substream(cfg.rng_seed, k);
      const double a = random_window_mean(p_00, cfg.window_seconds, rng);
      const double b = random_window_mean(p_01, cfg.window_seconds, rng);
      const double c = random_window_mean(p_11, cfg.window_seconds, rng);
      const double i = random_window_mean(p_input, cfg.window_seconds, rng);
      out[k] = intensity_measure(a, b, c, i, eta_s);
    }
  });
  return out;
}

std::string to_string(SigmaConvention c) {
  switch (c) {
    case SigmaConvention::SampleStd: return "sample-std";
    case SigmaConvention::SigmaPlus: return "sigma-plus";
    case SigmaConvention::SigmaMinus: return "sigma-minus";
    case SigmaConvention::SideMatched: return "side-matched";
  }
  return "sample-std";
}

SigmaConvention parse_sigma_convention(std::string_view text) {
  for (auto c : {SigmaConvention::SampleStd, SigmaConvention::SigmaPlus,
                 SigmaConvention::SigmaMinus, SigmaConvention::SideMatched}) {
    if (to_string(c) == text) return c;
  }
  throw ConfigError("unknown sigma convention '" + std::string(text) +
                    "' (expected sample-std, sigma-plus, sigma-minus or side-matched)");
}

double significance(const SpreadSummary& spread, double reference, SigmaConvention convention) {
  double sigma = 0.0;
  switch (convention) {
    case SigmaConvention::SampleStd: sigma = spread.std_dev; break;
    case SigmaConvention::SigmaPlus: sigma = spread.sigma_plus; break;
    case SigmaConvention::SigmaMinus: sigma = spread.sigma_minus; break;
    case SigmaConvention::SideMatched:
      sigma = reference > spread.median ? spread.sigma_plus : spread.sigma_minus;
      break;
  }
  if (!(sigma > kDegenerateSpread * std::max(1.0, std::abs(spread.median))))
    throw DegenerateDataError("spread under the " + to_string(convention) +
                              " convention is zero; significance is unbounded");
  return std::abs(spread.median - reference) / sigma;
}

double significance(const MeasureDistribution& dist, double reference,
                    SigmaConvention convention) {
  if (dist.samples.empty()) throw InputError("significance of an empty distribution");
  return significance(SpreadSummary::of(dist), reference, convention);
}

void Scenario::validate() const {
  if (!(mu_star >= 0.0) || !std::isfinite(mu_star)) throw ConfigError("mu_star must be >= 0");
  if (!(eta_s > 0.0 && eta_s <= 1.0)) throw ConfigError("eta_s must lie in (0, 1]");
  if (!(bs1_transmission >= 0.0 && bs1_transmission <= 1.0))
    throw ConfigError("bs1_transmission must lie in [0, 1]");
  if (weight_00 < 0.0 || weight_01 < 0.0 || weight_11 < 0.0)
    throw ConfigError("history weights must be nonnegative");
  if (!(weight_00 + weight_01 + weight_11 > 0.0))
    throw ConfigError("at least one history weight must be positive");
  if (!(input_power_w > 0.0)) throw ConfigError("input_power_w must be positive");
  if (!(duration_s > 0.0) || !(rate_hz > 0.0) || duration_s * rate_hz < 2.0)
    throw ConfigError("duration_s * rate_hz must give at least two samples");
  if (noise < 0.0 || phase_jitter < 0.0) throw ConfigError("noise levels must be nonnegative");
  if (!(std::abs(drift) < 2.0)) throw ConfigError("drift must lie in (-2, 2)");
}

Scenario scenario_from_filter(const optics::FilterParams& filter) {
  const optics::OpticalCircuit circuit = optics::build_dsi_filter(filter);
  const double ratio = optics::port_powers(circuit).at(optics::dsi::kOutput);
  const auto branches = optics::history_amplitudes_at_output(circuit);
  Scenario s;
  s.eta_s = filter.bs1.eta_s;
  s.mu_star = kFilterLossFactor * ratio / (s.eta_s * s.eta_s);
  s.bs1_transmission = filter.bs1.t * filter.bs1.t;
  s.weight_00 = branches.at("00").squaredNorm();
  s.weight_01 = branches.at("01").squaredNorm();
  s.weight_11 = branches.at("11").squaredNorm();
  return s;
}

TraceSet synthesize_traces(const Scenario& sc) {
  sc.validate();
  const auto n = static_cast<std::size_t>(std::floor(sc.duration_s * sc.rate_hz)) + 1;
  const double eta2 = sc.eta_s * sc.eta_s;
  const double p_in = sc.input_power_w;

  const double interference_weight =
      sc.weight_00 + sc.weight_01 + sc.weight_11 + 2.0 * std::sqrt(sc.weight_01 * sc.weight_11);
  const double scale = interference_weight > 0.0 ? sc.mu_star / interference_weight : 0.0;
  const double i01 = scale * sc.weight_01;
  const double i11 = scale * sc.weight_11;
  const double to_power = eta2 / kFilterLossFactor * p_in;

  TraceSet traces;
  for (std::size_t slot = 0; slot < kAllTraceLabels.size(); ++slot) {
    const TraceLabel label = kAllTraceLabels[slot];
    auto rng = stats::substream(sc.seed, 0x7261636500000000ULL + slot);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double t0 = static_cast<double>(slot) * (sc.duration_s + 60.0);
    std::vector<double> t(n);
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double elapsed = static_cast<double>(k) / sc.rate_hz;
      t[k] = t0 + elapsed;
      double level = 0.0;
      switch (label) {
        case TraceLabel::P_I: level = p_in; break;
        case TraceLabel::P_E: level = sc.mu_star * to_power; break;
        case TraceLabel::P_00: level = scale * sc.weight_00 * to_power; break;
        case TraceLabel::P_01: level = i01 * to_power; break;
        case TraceLabel::P_11: level = i11 * to_power; break;
        case TraceLabel::P_T: level = p_in * sc.eta_s * sc.bs1_transmission; break;
        case TraceLabel::P_R: level = p_in * sc.eta_s * (1.0 - sc.bs1_transmission); break;
        case TraceLabel::P_int: {
          const double phi = sc.phase + (sc.phase_jitter > 0.0 ? sc.phase_jitter * gauss(rng) : 0.0);
          level = (i01 + i11 + 2.0 * std::sqrt(i01 * i11) * std::cos(phi)) * to_power;
          break;
        }
      }
      const double span = static_cast<double>(n - 1) / sc.rate_hz;
      const double drift = 1.0 + sc.drift * (elapsed / span - 0.5);
      const double noise = sc.noise > 0.0 ? 1.0 + sc.noise * gauss(rng) : 1.0;
      p[k] = std::max(0.0, level * drift * noise);
    }
    traces.emplace(label, PowerTrace(label, std::move(t), std::move(p)));
  }
  return traces;
}

}  // namespace qmeasure::analysis
