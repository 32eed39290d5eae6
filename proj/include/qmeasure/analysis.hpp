#pragma once

// From recorded power traces to the distribution of the measure of the
// filtered event, and the statistics used to compare it with bounds.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmeasure/optics.hpp"
#include "qmeasure/stats.hpp"
#include "qmeasure/traces.hpp"

namespace qmeasure::analysis {

using stats::MeasureDistribution;

/// Detected probability times this factor is the measure: half of the event's
/// intensity is dumped by the Hadamard/PBS recombination and the BS2 tap.
inline constexpr double kFilterLossFactor = 2.0;

/// Measure ceiling of a classical probability.
inline constexpr double kClassicalBound = 1.0;

/// Largest fraction of phase samples that may fail the interference criterion.
inline constexpr double kMaxPhaseRejection = 0.5;

struct BootstrapConfig {
  double window_seconds = 100.0;
  std::size_t n_resamples = 100000;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// (P_T + P_R) / P_I.  Throws InputError for P_I <= 0 or negative powers.
double transmittance(double p_input, double p_transmitted, double p_reflected);
double transmittance(const TraceSet& traces);

/// Mean power over a uniformly placed window of `window_seconds`.
double random_window_mean(const PowerTrace& trace, double window_seconds, std::mt19937_64& rng);

/// For each resample, mean(window of trace_e) / mean(window of trace_i) with
/// the two windows placed independently.  Deterministic for a given seed.
std::vector<double> bootstrap_probability(const PowerTrace& trace_e, const PowerTrace& trace_i,
                                          const BootstrapConfig& cfg);

/// p / eta_s^2, one factor of eta_s per traversal of BS1.
std::vector<double> corrected_probability(std::span<const double> p, double eta_s);

MeasureDistribution measure_from_probability(std::span<const double> p_corrected);

/// Relative phase from I = I1 + I2 + 2 sqrt(I1 I2) cos(phi), in [0, pi].
/// nullopt when |I - I1 - I2| > 2 sqrt(I1 I2) beyond rounding.
std::optional<double> extract_phase(double i_phi, double i1, double i2);

struct PhaseDistribution {
  std::vector<double> samples;
  std::size_t n_drawn = 0;
  std::size_t n_rejected = 0;

  double rejection_fraction() const {
    return n_drawn ? static_cast<double>(n_rejected) / static_cast<double>(n_drawn) : 0.0;
  }
};

/// Windowed means of P_int, P_01, P_11 resampled independently and passed
/// through extract_phase.  Throws DegenerateDataError if nothing is accepted
/// and DataQualityError if more than `max_rejection` is rejected.
PhaseDistribution phase_distribution(const PowerTrace& p_int, const PowerTrace& p_01,
                                     const PowerTrace& p_11, const BootstrapConfig& cfg,
                                     double max_rejection = kMaxPhaseRejection);

/// I(g) = (2 / eta_s^2) P_g / P_I, then I(00) + I(01) + I(11) + 2 sqrt(I(01) I(11)).
double intensity_measure(double p_00, double p_01, double p_11, double p_input, double eta_s);

/// intensity_measure over independently resampled windows of the four traces.
std::vector<double> bootstrap_intensity_measure(const PowerTrace& p_00, const PowerTrace& p_01,
                                                const PowerTrace& p_11, const PowerTrace& p_input,
                                                double eta_s, const BootstrapConfig& cfg);

enum class SigmaConvention { SampleStd, SigmaPlus, SigmaMinus, SideMatched };

std::string to_string(SigmaConvention c);
SigmaConvention parse_sigma_convention(std::string_view text);

/// The spread numbers a significance needs; a distribution or a quoted
/// result (median with +- errors) both reduce to this.
struct SpreadSummary {
  double median = 0.0;
  double std_dev = 0.0;
  double sigma_plus = 0.0;
  double sigma_minus = 0.0;

  static SpreadSummary of(const MeasureDistribution& d) {
    return {d.median, d.std_dev, d.sigma_plus, d.sigma_minus};
  }
};

/// |median - reference| / sigma.  SideMatched uses sigma_plus when the
/// reference lies above the median and sigma_minus otherwise.  Throws
/// DegenerateDataError when the selected sigma is zero.
double significance(const SpreadSummary& spread, double reference,
                    SigmaConvention convention = SigmaConvention::SampleStd);
double significance(const MeasureDistribution& dist, double reference,
                    SigmaConvention convention = SigmaConvention::SampleStd);

// Synthetic recordings with a known answer.

struct Scenario {
  /// Measure encoded in P_E / P_I.
  double mu_star = 1.25;
  double eta_s = 0.9356;
  /// T / (T + R) of BS1, used to split the P_T and P_R traces.
  double bs1_transmission = 0.5;
  /// Relative intensities of histories 00, 01, 11 at the output, scaled so
  /// that intensity_measure reproduces mu_star.
  double weight_00 = 1.0;
  double weight_01 = 1.0;
  double weight_11 = 1.0;
  /// Relative phase of 01 and 11 in the P_int trace, plus per-sample jitter.
  /// At exactly 0 about half the noisy samples fall past the constructive
  /// limit and are rejected, so the default leaves a small residual phase.
  double phase = 0.2;
  double phase_jitter = 0.0;
  double input_power_w = 1e-3;
  double duration_s = 3600.0;
  double rate_hz = 10.0;
  /// Multiplicative Gaussian noise per sample (standard deviation).
  double noise = 0.0;
  /// Total fractional change of every trace from its first to last sample,
  /// centred so the trace mean is unchanged.
  double drift = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Scenario whose traces are the port powers of `filter`: mu_star, eta_s,
/// the BS1 split and the history weights come from the simulation.
Scenario scenario_from_filter(const optics::FilterParams& filter);

/// All eight labelled traces.  Each trace is recorded in its own time slot,
/// one after another.
TraceSet synthesize_traces(const Scenario& scenario);

}  // namespace qmeasure::analysis
