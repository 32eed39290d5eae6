#include "qmeasure/noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "qmeasure/analysis.hpp"
#include "qmeasure/errors.hpp"

namespace qmeasure::analysis {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

optics::BeamSplitter splitter(double transmission, double eta_s) {
  return {std::sqrt(transmission), std::sqrt(1.0 - transmission), std::numbers::pi / 2, eta_s};
}

ParamDistribution distribution_from_json(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return ParamDistribution::fixed(v.get<double>());
  if (!v.is_object()) throw ConfigError("noise." + key + " must be a number or an object");
  const std::string kind = v.value("kind", std::string("fixed"));
  auto num = [&](const char* name) {
    if (!v.contains(name) || !v.at(name).is_number())
      throw ConfigError("missing parameter 'noise." + key + "." + name + "'");
    return v.at(name).get<double>();
  };
  if (kind == "fixed") return ParamDistribution::fixed(num("value"));
  if (kind == "normal") {
    const double sd = num("sd");
    if (sd < 0.0) throw ConfigError("noise." + key + ".sd must be nonnegative");
    return ParamDistribution::normal(num("mean"), sd);
  }
  if (kind == "uniform") {
    const double lo = num("low");
    const double hi = num("high");
    if (hi < lo) throw ConfigError("noise." + key + " has high < low");
    return ParamDistribution::uniform(lo, hi);
  }
  throw ConfigError("noise." + key + ".kind must be fixed, normal or uniform");
}

nlohmann::json distribution_to_json(const ParamDistribution& d) {
  switch (d.kind) {
    case ParamDistribution::Kind::Fixed: return {{"kind", "fixed"}, {"value", d.a}};
    case ParamDistribution::Kind::Normal: return {{"kind", "normal"}, {"mean", d.a}, {"sd", d.b}};
    case ParamDistribution::Kind::Uniform:
      return {{"kind", "uniform"}, {"low", d.a}, {"high", d.b}};
  }
  return nullptr;
}

template <typename Fn>
void for_each_field(NoiseModel& m, Fn&& fn) {
  fn("eta_s", m.eta_s);
  fn("bs1_transmission", m.bs1_transmission);
  fn("bs2_transmission", m.bs2_transmission);
  fn("hwp_misalignment", m.hwp_misalignment);
  fn("mirror_R_s", m.mirror_R_s);
  fn("mirror_R_p", m.mirror_R_p);
  fn("mirror_phase_sp", m.mirror_phase_sp);
  fn("pbs_extinction", m.pbs_extinction);
  fn("polarizer_extinction", m.polarizer_extinction);
}

}  // namespace

double ParamDistribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::Fixed: return a;
    case Kind::Normal: return b > 0.0 ? std::normal_distribution<double>(a, b)(rng) : a;
    case Kind::Uniform: return b > a ? std::uniform_real_distribution<double>(a, b)(rng) : a;
  }
  return a;
}

optics::FilterParams NoiseModel::sample(std::mt19937_64& rng, int max_retries) const {
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const double eta = eta_s.sample(rng);
    const double t1 = bs1_transmission.sample(rng);
    const double t2 = bs2_transmission.sample(rng);
    const double rs = mirror_R_s.sample(rng);
    const double rp = mirror_R_p.sample(rng);
    const double phase_sp = mirror_phase_sp.sample(rng);
    const double pol = polarizer_extinction.sample(rng);
    const double pbs[4] = {pbs_extinction.sample(rng), pbs_extinction.sample(rng),
                           pbs_extinction.sample(rng), pbs_extinction.sample(rng)};
    const double hwp[3] = {hwp_misalignment.sample(rng), hwp_misalignment.sample(rng),
                           hwp_misalignment.sample(rng)};

    bool ok = eta > 0.0 && eta <= 1.0 && in_unit(t1) && in_unit(t2) && in_unit(rs) &&
              in_unit(rp) && in_unit(pol) && std::isfinite(phase_sp);
    for (double e : pbs) ok = ok && in_unit(e);
    for (double h : hwp) ok = ok && std::isfinite(h);
    if (!ok) continue;

    optics::FilterParams f;
    f.input_polarizer = {0.0, pol};
    f.bs1 = splitter(t1, eta);
    f.bs2 = splitter(t2, 1.0);
    f.hwp1_angle += hwp[0];
    f.hwp2_angle += hwp[1];
    f.hwp3_angle += hwp[2];
    f.mirror = {rs, rp, phase_sp, 0.0};
    f.pbs1 = {pbs[0], pbs[1]};
    f.pbs2 = {pbs[2], pbs[3]};
    return f;
  }
  throw ConfigError("noise model kept producing unphysical parameters after " +
                    std::to_string(max_retries) + " redraws");
}

NoiseModel noise_model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("noise model must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    bool known = false;
    NoiseModel probe;
    for_each_field(probe, [&](const char* name, ParamDistribution&) { known = known || key == name; });
    if (!known) throw ConfigError("unknown noise parameter '" + key + "'");
  }
  NoiseModel m;
  for_each_field(m, [&](const char* name, ParamDistribution& d) {
    if (doc.contains(name)) d = distribution_from_json(doc.at(name), name);
  });
  return m;
}

nlohmann::json noise_model_to_json(const NoiseModel& model) {
  NoiseModel copy = model;
  nlohmann::json out = nlohmann::json::object();
  for_each_field(copy, [&](const char* name, ParamDistribution& d) {
    out[name] = distribution_to_json(d);
  });
  return out;
}

double filter_measure(const optics::FilterParams& filter, double phase) {
  const auto branches =
      optics::history_amplitudes_at_output(optics::build_dsi_filter(filter));
  const double scale = std::sqrt(kFilterLossFactor) / filter.bs1.eta_s;
  const optics::Jones a00 = scale * branches.at("00");
  const optics::Jones a01 = scale * branches.at("01");
  optics::Jones a11 = scale * branches.at("11");
  const std::complex<double> overlap = a11.dot(a01);  // conj(a11) . a01
  if (std::abs(overlap) > 0.0) a11 *= overlap / std::abs(overlap);
  return a00.squaredNorm() + (a01 + std::polar(1.0, phase) * a11).squaredNorm();
}

stats::MeasureDistribution theoretical_measure(const NoiseModel& noise,
                                               std::span<const double> phase_samples,
                                               std::size_t n_draws, std::uint64_t seed) {
  if (n_draws == 0) throw InputError("theoretical_measure needs at least one draw");
  std::vector<double> mu(n_draws);
  stats::parallel_for(n_draws, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      auto rng = stats::substream(seed, k);
      const optics::FilterParams filter = noise.sample(rng);
      double phase = 0.0;
      if (!phase_samples.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, phase_samples.size() - 1);
        phase = phase_samples[pick(rng)];
      }
      mu[k] = filter_measure(filter, phase);
    }
  });
  return stats::MeasureDistribution::from_samples(std::move(mu));
}

}  // namespace qmeasure::analysis
