#pragma once

// Component-parameter uncertainty and the theoretical band of the measure
// it implies for the event filter.

#include <cstdint>
#include <random>
#include <span>
#include <string>

#include <json.hpp>

#include "qmeasure/optics.hpp"
#include "qmeasure/stats.hpp"

namespace qmeasure::analysis {

/// A scalar parameter distribution: fixed, normal(mean, sd) or
/// uniform(low, high).
struct ParamDistribution {
  enum class Kind { Fixed, Normal, Uniform };
  Kind kind = Kind::Fixed;
  double a = 0.0;
  double b = 0.0;

  static ParamDistribution fixed(double v) { return {Kind::Fixed, v, 0.0}; }
  static ParamDistribution normal(double mean, double sd) { return {Kind::Normal, mean, sd}; }
  static ParamDistribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

  double sample(std::mt19937_64& rng) const;
  double center() const { return kind == Kind::Uniform ? 0.5 * (a + b) : a; }
};

/// Uncertain component parameters of the event filter.  Fractions are power
/// fractions; angles and phases are radians.
struct NoiseModel {
  ParamDistribution eta_s = ParamDistribution::fixed(1.0);
  /// T / (T + R) of BS1 and BS2.
  ParamDistribution bs1_transmission = ParamDistribution::fixed(0.5);
  ParamDistribution bs2_transmission = ParamDistribution::fixed(0.5);
  /// Offset added independently to each half-wave plate's nominal angle.
  ParamDistribution hwp_misalignment = ParamDistribution::fixed(0.0);
  ParamDistribution mirror_R_s = ParamDistribution::fixed(1.0);
  ParamDistribution mirror_R_p = ParamDistribution::fixed(1.0);
  /// Phase of s relative to p on each mirror reflection.
  ParamDistribution mirror_phase_sp = ParamDistribution::fixed(0.0);
  /// Leakage power fraction, drawn independently for each PBS port.
  ParamDistribution pbs_extinction = ParamDistribution::fixed(0.0);
  ParamDistribution polarizer_extinction = ParamDistribution::fixed(0.0);

  static NoiseModel ideal() { return {}; }

  /// Draws one filter.  Out-of-range draws are redrawn up to `max_retries`
  /// times before a ConfigError.
  optics::FilterParams sample(std::mt19937_64& rng, int max_retries = 1000) const;
};

NoiseModel noise_model_from_json(const nlohmann::json& doc);
nlohmann::json noise_model_to_json(const NoiseModel& model);

/// |A(00)|^2 + |A(01) + e^{i phase} A(11)|^2 for one filter, with A(g) the
/// Jones vector reaching PM along history g scaled by sqrt(2) / eta_s.  The
/// 11 branch is first rotated into phase with 01, as the glass plate is tuned
/// for maximum output.
double filter_measure(const optics::FilterParams& filter, double phase);

/// filter_measure over `n_draws` filters drawn from `noise`, each paired with
/// a phase drawn uniformly from `phase_samples` (phase 0 when empty).
stats::MeasureDistribution theoretical_measure(const NoiseModel& noise,
                                               std::span<const double> phase_samples,
                                               std::size_t n_draws, std::uint64_t seed);

}  // namespace qmeasure::analysis
