#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmeasure/analysis.hpp"
#include "qmeasure/errors.hpp"
#include "qmeasure/noise.hpp"

using namespace qmeasure;
using namespace qmeasure::analysis;

namespace {

const double kPi = std::numbers::pi;

PowerTrace make_trace(TraceLabel label, std::size_t n, double dt,
                      const std::function<double(std::size_t)>& power) {
  std::vector<double> t(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = dt * static_cast<double>(i);
    p[i] = power(i);
  }
  return PowerTrace(label, t, p);
}

PowerTrace constant(TraceLabel label, double value, std::size_t n = 2000) {
  return make_trace(label, n, 0.1, [=](std::size_t) { return value; });
}

BootstrapConfig quick(std::size_t n = 2000, std::uint64_t seed = 1) {
  BootstrapConfig cfg;
  cfg.window_seconds = 10.0;
  cfg.n_resamples = n;
  cfg.rng_seed = seed;
  return cfg;
}

MeasureDistribution run_pipeline(const TraceSet& traces, const BootstrapConfig& cfg) {
  const double eta = transmittance(traces);
  const auto p = bootstrap_probability(traces.at(TraceLabel::P_E), traces.at(TraceLabel::P_I), cfg);
  return measure_from_probability(corrected_probability(p, eta));
}

}  // namespace

TEST_CASE("transmittance") {
  // Absolute T and R of the substrate as percentages of the input.
  CHECK(transmittance(1.0, 0.4921, 0.4434) == doctest::Approx(0.9355).epsilon(1e-12));
  CHECK(std::abs(transmittance(1.0, 0.4921, 0.4434) - 0.9356) < 2e-4);
  CHECK(transmittance(2.0, 1.2, 0.8) == 1.0);
  CHECK_THROWS_AS(transmittance(0.0, 1.0, 1.0), InputError);
  CHECK_THROWS_AS(transmittance(1.0, -0.1, 0.5), InputError);

  Scenario s;
  s.eta_s = 0.95;
  s.duration_s = 600;
  CHECK(transmittance(synthesize_traces(s)) == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("constant traces bootstrap to a constant ratio") {
  const auto p = bootstrap_probability(constant(TraceLabel::P_E, 0.5), constant(TraceLabel::P_I, 1.0),
                                       quick(500));
  REQUIRE(p.size() == 500);
  for (double x : p) CHECK(x == 0.5);
}

TEST_CASE("bootstrap errors") {
  auto cfg = quick();
  cfg.window_seconds = 1000.0;
  CHECK_THROWS_AS(bootstrap_probability(constant(TraceLabel::P_E, 0.5), constant(TraceLabel::P_I, 1.0), cfg),
                  InputError);
  cfg = quick();
  cfg.n_resamples = 0;
  CHECK_THROWS_AS(bootstrap_probability(constant(TraceLabel::P_E, 0.5), constant(TraceLabel::P_I, 1.0), cfg),
                  ConfigError);
}

TEST_CASE("bootstrap is deterministic per seed") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::vector<double> noise(5000);
  for (double& x : noise) x = z(rng);
  const auto e = make_trace(TraceLabel::P_E, 5000, 0.1, [&](std::size_t i) { return 0.55 * (1 + 0.01 * noise[i]); });
  const auto i = make_trace(TraceLabel::P_I, 5000, 0.1, [&](std::size_t k) { return 1 + 0.01 * noise[4999 - k]; });
  const auto a = bootstrap_probability(e, i, quick(3000, 9));
  const auto b = bootstrap_probability(e, i, quick(3000, 9));
  const auto c = bootstrap_probability(e, i, quick(3000, 10));
  CHECK(a == b);
  CHECK(a != c);

  const auto d = MeasureDistribution::from_samples(a);
  CHECK(std::abs(d.median - 0.55) < 3 * d.std_dev);
}

TEST_CASE("drift widens the distribution") {
  const auto flat_e = constant(TraceLabel::P_E, 0.5, 5000);
  const auto flat_i = constant(TraceLabel::P_I, 1.0, 5000);
  // +-1% linear drift, i.e. 2% from start to end.
  const auto drift = [](double level) {
    return [level](std::size_t i) { return level * (1.0 + 0.02 * (static_cast<double>(i) / 4999.0 - 0.5)); };
  };
  const auto drift_e = make_trace(TraceLabel::P_E, 5000, 0.1, drift(0.5));
  const auto drift_i = make_trace(TraceLabel::P_I, 5000, 0.1, drift(1.0));
  const auto strong_i = make_trace(TraceLabel::P_I, 5000, 0.1, [](std::size_t i) {
    return 1.0 + 0.4 * (static_cast<double>(i) / 4999.0 - 0.5);
  });

  const auto none = MeasureDistribution::from_samples(bootstrap_probability(flat_e, flat_i, quick(4000)));
  const auto on_e = MeasureDistribution::from_samples(bootstrap_probability(drift_e, flat_i, quick(4000)));
  const auto on_i = MeasureDistribution::from_samples(bootstrap_probability(flat_e, drift_i, quick(4000)));
  const auto skewed = MeasureDistribution::from_samples(bootstrap_probability(flat_e, strong_i, quick(4000)));
  CHECK(none.std_dev == 0.0);
  CHECK(on_e.std_dev > 1e-3);
  CHECK(on_i.std_dev > 1e-3);
  // A linear drift of P_E gives uniformly distributed window means, so the
  // band is symmetric; dividing by a drifting P_I skews it upwards.  At
  // +-1% the skew is below the percentile noise, so check it at +-20%.
  CHECK(on_e.sigma_plus == doctest::Approx(on_e.sigma_minus).epsilon(0.05));
  CHECK(skewed.sigma_plus > 1.1 * skewed.sigma_minus);
}

TEST_CASE("loss correction and measure") {
  const std::vector<double> p{0.5469};
  CHECK(corrected_probability(p, 0.9356)[0] == doctest::Approx(0.5469 / (0.9356 * 0.9356)));
  CHECK(std::abs(corrected_probability(p, 0.9356)[0] - 0.6247) < 1e-4);
  CHECK(corrected_probability(p, 1.0)[0] == 0.5469);
  CHECK(corrected_probability(std::vector<double>{0.0}, 0.9)[0] == 0.0);
  CHECK_THROWS_AS(corrected_probability(p, 0.0), InputError);
  CHECK_THROWS_AS(corrected_probability(p, 1.2), InputError);

  const auto mu = measure_from_probability(std::vector<double>(50, 0.625));
  CHECK(mu.median == 1.25);
  CHECK(mu.sigma_plus == 0.0);
  CHECK(mu.sigma_minus == 0.0);
}

TEST_CASE("extract_phase") {
  CHECK(*extract_phase(1 + 2 + 2 * std::sqrt(2.0), 1, 2) == 0.0);
  CHECK(*extract_phase(3, 1, 2) == kPi / 2);
  CHECK(*extract_phase(1 + 2 - 2 * std::sqrt(2.0), 1, 2) == kPi);
  CHECK(*extract_phase(0.75, 0.25, 0.25) == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK_FALSE(extract_phase(4.1, 1, 1).has_value());
  CHECK_FALSE(extract_phase(-0.1, 1, 1).has_value());
  CHECK_THROWS_AS(extract_phase(1, 0, 1), InputError);

  for (int k = 0; k < 64; ++k) {
    const double phi = kPi * k / 63;
    const double i1 = 0.3;
    const double i2 = 0.7;
    const double i = i1 + i2 + 2 * std::sqrt(i1 * i2) * std::cos(phi);
    const auto got = extract_phase(i, i1, i2);
    REQUIRE(got.has_value());
    // arccos loses precision near 0 and pi where its slope diverges.
    const double slope = std::max(1.0, 1.0 / std::max(std::sin(phi), 1e-8));
    CHECK(std::abs(*got - phi) < 1e-12 * slope * 64);
  }
}

TEST_CASE("phase distribution") {
  const double limit = 0.25 + 0.25 + 2 * 0.25;
  const auto at_limit = phase_distribution(constant(TraceLabel::P_int, limit), constant(TraceLabel::P_01, 0.25),
                                           constant(TraceLabel::P_11, 0.25), quick(300));
  CHECK(at_limit.samples.size() == 300);
  for (double phi : at_limit.samples) CHECK(phi == 0.0);

  CHECK_THROWS_AS(phase_distribution(constant(TraceLabel::P_int, 1.2), constant(TraceLabel::P_01, 0.25),
                                     constant(TraceLabel::P_11, 0.25), quick(100)),
                  DegenerateDataError);

  // 70% of the single-sample windows sit above the constructive limit.
  BootstrapConfig one_sample = quick(2000);
  one_sample.window_seconds = 1.0;
  const auto mostly_bad = make_trace(TraceLabel::P_int, 1000, 1.0,
                                     [](std::size_t i) { return i % 10 < 7 ? 1.1 : 0.9; });
  CHECK_THROWS_AS(phase_distribution(mostly_bad, constant(TraceLabel::P_01, 0.25, 1000),
                                     constant(TraceLabel::P_11, 0.25, 1000), one_sample),
                  DataQualityError);
  const auto some_bad = make_trace(TraceLabel::P_int, 1000, 1.0,
                                   [](std::size_t i) { return i % 10 < 3 ? 1.1 : 0.9; });
  const auto pd = phase_distribution(some_bad, constant(TraceLabel::P_01, 0.25, 1000),
                                     constant(TraceLabel::P_11, 0.25, 1000), one_sample);
  CHECK(pd.rejection_fraction() == doctest::Approx(0.3).epsilon(0.1));
  CHECK(pd.n_rejected + pd.samples.size() == pd.n_drawn);
}

TEST_CASE("phase recovered from synthetic traces") {
  Scenario s;
  s.duration_s = 1200;
  s.phase = 0.1;
  s.noise = 1e-3;
  s.seed = 5;
  const auto traces = synthesize_traces(s);
  const auto pd = phase_distribution(traces.at(TraceLabel::P_int), traces.at(TraceLabel::P_01),
                                     traces.at(TraceLabel::P_11), quick(2000));
  CHECK(stats::median(pd.samples) == doctest::Approx(0.1).epsilon(0.05));

  // Gaussian jitter of width s averages cos(phi) down by exp(-s^2 / 2).
  s.phase_jitter = 0.05;
  const auto jittered = synthesize_traces(s);
  const auto pj = phase_distribution(jittered.at(TraceLabel::P_int), jittered.at(TraceLabel::P_01),
                                     jittered.at(TraceLabel::P_11), quick(2000));
  const double effective = std::acos(std::cos(0.1) * std::exp(-0.05 * 0.05 / 2));
  CHECK(stats::median(pj.samples) == doctest::Approx(effective).epsilon(0.05));
}

TEST_CASE("intensity measure") {
  // Ideal filter, single-history port powers: each P_g / P_I = eta^2 / 8.
  const double eta = 0.9356;
  const double pg = eta * eta / 8;
  CHECK(intensity_measure(pg, pg, pg, 1.0, eta) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(intensity_measure(0.3, 0.0, 0.0, 1.0, eta) == doctest::Approx(2 * 0.3 / (eta * eta)));
  CHECK_THROWS_AS(intensity_measure(0.1, 0.1, 0.1, 0.0, eta), InputError);
}

TEST_CASE("significance") {
  // Report-format fixtures.  The sigma is back-derived from the quoted ratio:
  // 0.172 / 13.32 and 0.010 / 0.52.
  const double sigma_bound = 0.172 / 13.32;
  CHECK(significance(SpreadSummary{1.172, sigma_bound, 0.013, 0.019}, 1.0) ==
        doctest::Approx(13.32).epsilon(1e-9));
  CHECK(significance(SpreadSummary{1.172, 0.01291, 0.013, 0.019}, 1.0) ==
        doctest::Approx(13.32).epsilon(5e-4));
  CHECK(significance(SpreadSummary{1.172, 0.019231, 0.013, 0.019}, 1.182) ==
        doctest::Approx(0.52).epsilon(1e-4));

  const SpreadSummary asym{1.172, 0.015, 0.013, 0.019};
  CHECK(significance(asym, 1.0, SigmaConvention::SigmaPlus) == doctest::Approx(0.172 / 0.013));
  CHECK(significance(asym, 1.0, SigmaConvention::SigmaMinus) == doctest::Approx(0.172 / 0.019));
  CHECK(significance(asym, 1.0, SigmaConvention::SideMatched) == doctest::Approx(0.172 / 0.019));
  CHECK(significance(asym, 1.182, SigmaConvention::SideMatched) == doctest::Approx(0.010 / 0.013));

  const auto flat = MeasureDistribution::from_samples(std::vector<double>(10, 1.25));
  CHECK_THROWS_AS(significance(flat, 1.25), DegenerateDataError);
  CHECK_THROWS_AS(significance(flat, 1.0), DegenerateDataError);

  for (auto c : {SigmaConvention::SampleStd, SigmaConvention::SigmaPlus, SigmaConvention::SigmaMinus,
                 SigmaConvention::SideMatched})
    CHECK(parse_sigma_convention(to_string(c)) == c);
  CHECK_THROWS_AS(parse_sigma_convention("mad"), ConfigError);
}

TEST_CASE("synthetic scenario validation and determinism") {
  Scenario s;
  s.duration_s = 300;
  s.noise = 0.01;
  s.drift = 0.02;
  s.seed = 17;
  const auto a = synthesize_traces(s);
  const auto b = synthesize_traces(s);
  CHECK(a.size() == 8);
  for (TraceLabel l : kAllTraceLabels) {
    CHECK(std::equal(a.at(l).powers().begin(), a.at(l).powers().end(), b.at(l).powers().begin()));
  }
  s.seed = 18;
  const auto c = synthesize_traces(s);
  CHECK_FALSE(std::equal(a.at(TraceLabel::P_E).powers().begin(), a.at(TraceLabel::P_E).powers().end(),
                         c.at(TraceLabel::P_E).powers().begin()));

  Scenario bad;
  bad.mu_star = -1;
  CHECK_THROWS_AS(synthesize_traces(bad), ConfigError);
  bad = Scenario{};
  bad.eta_s = 1.5;
  CHECK_THROWS_AS(synthesize_traces(bad), ConfigError);
  bad = Scenario{};
  bad.rate_hz = 0;
  CHECK_THROWS_AS(synthesize_traces(bad), ConfigError);
}

TEST_CASE("pipeline round trip") {
  Scenario s;
  s.duration_s = 1800;
  s.mu_star = 1.25;
  const auto exact = run_pipeline(synthesize_traces(s), quick(1000));
  CHECK(exact.median == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(exact.sigma_plus < 1e-12);

  s.mu_star = 1.20;
  s.noise = 0.01;
  s.drift = 0.02;
  s.seed = 3;
  const auto noisy = run_pipeline(synthesize_traces(s), quick(5000));
  CHECK(noisy.median - noisy.sigma_minus <= 1.20);
  CHECK(noisy.median + noisy.sigma_plus >= 1.20);

  const auto traces = synthesize_traces(s);
  const double eta = transmittance(traces);
  const auto im = bootstrap_intensity_measure(traces.at(TraceLabel::P_00), traces.at(TraceLabel::P_01),
                                              traces.at(TraceLabel::P_11), traces.at(TraceLabel::P_I), eta,
                                              quick(2000));
  CHECK(stats::median(im) == doctest::Approx(1.20).epsilon(0.01));
}

TEST_CASE("scenario from a simulated filter") {
  optics::FilterParams f;
  f.bs1 = {std::sqrt(0.526), std::sqrt(0.474), kPi / 2, 0.9356};
  const Scenario s = scenario_from_filter(f);
  CHECK(s.eta_s == 0.9356);
  CHECK(s.bs1_transmission == doctest::Approx(0.526));
  CHECK(s.mu_star == doctest::Approx(0.526 * (4 - 3 * 0.526)).epsilon(1e-9));
}

TEST_CASE("theoretical band") {
  const auto ideal = theoretical_measure(NoiseModel::ideal(), {}, 200, 1);
  CHECK(ideal.median == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(ideal.sigma_plus < 1e-12);

  // The substrate transmittance is folded out of the amplitudes.
  NoiseModel lossy;
  lossy.eta_s = ParamDistribution::normal(0.9356, 0.002);
  CHECK(theoretical_measure(lossy, {}, 200, 1).median == doctest::Approx(1.25).epsilon(1e-12));

  NoiseModel real;
  real.bs1_transmission = ParamDistribution::normal(0.5, 0.01);
  real.hwp_misalignment = ParamDistribution::normal(0.0, 0.01);
  real.mirror_phase_sp = ParamDistribution::normal(0.0, 0.05);
  const auto at_zero = theoretical_measure(real, std::vector<double>{0.0}, 2000, 2);
  std::vector<double> spread;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  for (int k = 0; k < 500; ++k) spread.push_back(u(rng));
  const auto with_spread = theoretical_measure(real, spread, 2000, 2);
  CHECK(with_spread.median < at_zero.median);
  CHECK(at_zero.median < 1.25 + 1e-3);

  CHECK_THROWS_AS(theoretical_measure(real, {}, 0, 1), InputError);
  CHECK(filter_measure(optics::FilterParams::ideal(), kPi / 2) == doctest::Approx(0.75));
}

TEST_CASE("noise model JSON") {
  const auto m = noise_model_from_json(nlohmann::json::parse(
      R"({"eta_s": 0.93, "bs1_transmission": {"kind": "normal", "mean": 0.52, "sd": 0.01},
          "hwp_misalignment": {"kind": "uniform", "low": -0.01, "high": 0.01}})"));
  CHECK(m.eta_s.center() == 0.93);
  CHECK(m.bs1_transmission.kind == ParamDistribution::Kind::Normal);
  CHECK(m.hwp_misalignment.center() == 0.0);
  const auto back = noise_model_from_json(noise_model_to_json(m));
  CHECK(back.bs1_transmission.b == 0.01);
  CHECK_THROWS_AS(noise_model_from_json(nlohmann::json::parse(R"({"gain": 1})")), ConfigError);
  CHECK_THROWS_AS(noise_model_from_json(nlohmann::json::parse(R"({"eta_s": {"kind": "normal", "mean": 1}})")),
                  ConfigError);

  NoiseModel impossible;
  impossible.eta_s = ParamDistribution::fixed(2.0);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(impossible.sample(rng, 5), ConfigError);
}
