#include "qmeasure/optics.hpp"

#include <algorithm>
#include <cmath>

namespace qmeasure::optics {

namespace {

constexpr double kUnitTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_unit_interval(double value, const std::string& what) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0)
    throw ConfigError(what + " must lie in [0, 1], got " + std::to_string(value));
}

void require_finite(double value, const std::string& what) {
  if (!std::isfinite(value)) throw ConfigError(what + " must be finite");
}

std::pair<std::size_t, std::size_t> input_arity(const ComponentKind& kind) {
  if (std::holds_alternative<BeamSplitter>(kind) || std::holds_alternative<PolarizingBS>(kind))
    return {1, 2};
  return {1, 1};
}

std::pair<std::size_t, std::size_t> output_arity(const ComponentKind& kind) {
  if (std::holds_alternative<BeamSplitter>(kind) || std::holds_alternative<PolarizingBS>(kind))
    return {2, 2};
  if (std::holds_alternative<Polarizer>(kind)) return {1, 2};
  return {1, 1};
}

// Output Jones vectors of a two-port device described per polarization by
// out0 = T in0 + R in1, out1 = R in0 + T in1.
std::pair<Jones, Jones> two_port(const JonesMatrix& T, const JonesMatrix& R, const Jones& in0,
                                 const Jones& in1) {
  return {T * in0 + R * in1, R * in0 + T * in1};
}

std::vector<Jones> transform(const ComponentKind& kind, const std::vector<Jones>& in) {
  const Jones vacuum = Jones::Zero();
  const Jones& in0 = in[0];
  const Jones& in1 = in.size() > 1 ? in[1] : vacuum;
  return std::visit(
      overloaded{
          [&](const BeamSplitter& bs) -> std::vector<Jones> {
            const double scale = std::sqrt(bs.eta_s);
            const JonesMatrix T = scale * bs.t * JonesMatrix::Identity();
            const JonesMatrix R = scale * std::polar(bs.r, bs.phi) * JonesMatrix::Identity();
            auto [a, b] = two_port(T, R, in0, in1);
            return {a, b};
          },
          [&](const PolarizingBS& pbs) -> std::vector<Jones> {
            const std::complex<double> i(0.0, 1.0);
            JonesMatrix T = JonesMatrix::Zero();
            JonesMatrix R = JonesMatrix::Zero();
            T(0, 0) = std::sqrt(1.0 - pbs.extinction_R);
            T(1, 1) = std::sqrt(pbs.extinction_T);
            R(0, 0) = i * std::sqrt(pbs.extinction_R);
            R(1, 1) = i * std::sqrt(1.0 - pbs.extinction_T);
            auto [a, b] = two_port(T, R, in0, in1);
            return {a, b};
          },
          [&](const HalfWavePlate& hwp) -> std::vector<Jones> {
            return {jones::half_wave_plate(hwp.theta) * in0};
          },
          [&](const PhasePlate& plate) -> std::vector<Jones> {
            return {std::polar(1.0, plate.phase) * in0};
          },
          [&](const Mirror& m) -> std::vector<Jones> {
            return {jones::mirror(m.R_s, m.R_p, m.phase_s, m.phase_p) * in0};
          },
          [&](const Polarizer& p) -> std::vector<Jones> {
            return {jones::polarizer_pass(p.axis, p.extinction) * in0,
                    jones::polarizer_reject(p.axis, p.extinction) * in0};
          },
      },
      kind);
}

std::string describe(std::size_t index, const OpticalComponent& c) {
  std::string s = "component " + std::to_string(index) + " (" + c.kind_name();
  if (!c.name.empty()) s += " '" + c.name + "'";
  return s + ")";
}

}  // namespace

ModeState ModeState::horizontal(const std::string& path) {
  ModeState s;
  s.set(path, jones::horizontal<double>());
  return s;
}

const Jones& ModeState::at(const std::string& path) const {
  const auto it = paths_.find(path);
  if (it == paths_.end()) throw WiringError("unknown path '" + path + "'");
  return it->second;
}

std::complex<double> ModeState::amplitude(const std::string& path, Polarization p) const {
  return at(path)(static_cast<int>(p));
}

Jones ModeState::take(const std::string& path) {
  const auto it = paths_.find(path);
  if (it == paths_.end()) throw WiringError("unknown path '" + path + "'");
  Jones j = it->second;
  paths_.erase(it);
  return j;
}

double ModeState::power(const std::string& path) const { return at(path).squaredNorm(); }

double ModeState::total_power() const {
  double sum = 0.0;
  for (const auto& [_, j] : paths_) sum += j.squaredNorm();
  return sum;
}

std::string OpticalComponent::kind_name() const {
  return std::visit(overloaded{
                        [](const BeamSplitter&) { return "BeamSplitter"; },
                        [](const PolarizingBS&) { return "PolarizingBS"; },
                        [](const HalfWavePlate&) { return "HalfWavePlate"; },
                        [](const PhasePlate&) { return "PhasePlate"; },
                        [](const Mirror&) { return "Mirror"; },
                        [](const Polarizer&) { return "Polarizer"; },
                    },
                    kind);
}

void OpticalComponent::validate() const {
  const std::string who = kind_name() + (name.empty() ? "" : " '" + name + "'");
  std::visit(overloaded{
                 [&](const BeamSplitter& bs) {
                   require_unit_interval(bs.t, who + " t");
                   require_unit_interval(bs.r, who + " r");
                   require_finite(bs.phi, who + " phi");
                   if (std::abs(bs.t * bs.t + bs.r * bs.r - 1.0) > kUnitTolerance)
                     throw ConfigError(who + " must satisfy t^2 + r^2 = 1");
                   if (!(bs.eta_s > 0.0 && bs.eta_s <= 1.0))
                     throw ConfigError(who + " eta_s must lie in (0, 1]");
                 },
                 [&](const PolarizingBS& p) {
                   require_unit_interval(p.extinction_T, who + " extinction_T");
                   require_unit_interval(p.extinction_R, who + " extinction_R");
                 },
                 [&](const HalfWavePlate& h) { require_finite(h.theta, who + " theta"); },
                 [&](const PhasePlate& p) { require_finite(p.phase, who + " phase"); },
                 [&](const Mirror& m) {
                   require_unit_interval(m.R_s, who + " R_s");
                   require_unit_interval(m.R_p, who + " R_p");
                   require_finite(m.phase_s, who + " phase_s");
                   require_finite(m.phase_p, who + " phase_p");
                 },
                 [&](const Polarizer& p) {
                   require_finite(p.axis, who + " axis");
                   require_unit_interval(p.extinction, who + " extinction");
                 },
             },
             kind);

  const auto [in_min, in_max] = input_arity(kind);
  const auto [out_min, out_max] = output_arity(kind);
  if (inputs.size() < in_min || inputs.size() > in_max)
    throw WiringError(who + " takes " + std::to_string(in_min) + "-" + std::to_string(in_max) +
                      " inputs, got " + std::to_string(inputs.size()));
  if (outputs.size() < out_min || outputs.size() > out_max)
    throw WiringError(who + " takes " + std::to_string(out_min) + "-" +
                      std::to_string(out_max) + " outputs, got " +
                      std::to_string(outputs.size()));
  if (inputs.size() == 2 && inputs[0] == inputs[1])
    throw WiringError(who + " is fed twice from '" + inputs[0] + "'");
  if (outputs.size() == 2 && outputs[0] == outputs[1])
    throw WiringError(who + " emits '" + outputs[0] + "' twice");
}

namespace {

void apply_in_place(ModeState& state, const OpticalComponent& c) {
  std::vector<Jones> in;
  in.reserve(c.inputs.size());
  for (const auto& port : c.inputs) {
    if (!state.contains(port))
      throw WiringError(c.kind_name() + " input port '" + port + "' is not present in the state");
    in.push_back(state.take(port));
  }
  const std::vector<Jones> out = transform(c.kind, in);
  for (std::size_t k = 0; k < c.outputs.size(); ++k) {
    if (state.contains(c.outputs[k]))
      throw WiringError(c.kind_name() + " output port '" + c.outputs[k] +
                        "' would overwrite a live path");
    state.set(c.outputs[k], out[k]);
  }
}

}  // namespace

ModeState apply_component(const ModeState& state, const OpticalComponent& c) {
  c.validate();
  ModeState next = state;
  apply_in_place(next, c);
  return next;
}

void OpticalCircuit::validate() const {
  if (input_port.empty()) throw WiringError("circuit has no input port");
  std::set<std::string> live{input_port};
  for (std::size_t i = 0; i < components.size(); ++i) {
    const OpticalComponent& c = components[i];
    try {
      c.validate();
    } catch (const WiringError& e) {
      throw WiringError(describe(i, c) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(describe(i, c) + ": " + e.what());
    }
    for (const auto& port : c.inputs) {
      if (!live.erase(port))
        throw WiringError(describe(i, c) + ": input port '" + port + "' is not fed");
    }
    for (const auto& port : c.outputs) {
      if (!live.insert(port).second)
        throw WiringError(describe(i, c) + ": output port '" + port +
                          "' is already in use");
    }
  }
  for (const auto& port : monitored_ports) {
    if (!live.count(port))
      throw WiringError("monitored port '" + port + "' is not a circuit output");
  }
  for (const auto& [name, count] : checkpoints) {
    if (count > components.size())
      throw WiringError("checkpoint '" + name + "' lies beyond the last component");
  }
}

std::set<std::string> OpticalCircuit::internal_paths() const {
  std::set<std::string> out;
  for (const auto& c : components) out.insert(c.outputs.begin(), c.outputs.end());
  return out;
}

std::vector<std::string> OpticalCircuit::terminal_ports() const {
  std::set<std::string> live{input_port};
  for (const auto& c : components) {
    for (const auto& port : c.inputs) live.erase(port);
    live.insert(c.outputs.begin(), c.outputs.end());
  }
  return {live.begin(), live.end()};
}

Propagation propagate(const OpticalCircuit& circuit, const ModeState& input,
                      const std::set<std::string>& blocked) {
  circuit.validate();
  if (!input.contains(circuit.input_port))
    throw WiringError("input state does not populate input port '" + circuit.input_port + "'");
  const std::set<std::string> internal = circuit.internal_paths();
  for (const auto& path : blocked) {
    if (!internal.count(path))
      throw WiringError("cannot block '" + path + "': not an internal path of the circuit");
  }

  std::multimap<std::size_t, std::string> snapshots;
  for (const auto& [name, count] : circuit.checkpoints) snapshots.emplace(count, name);

  Propagation result;
  ModeState state = input;
  auto snapshot = [&](std::size_t applied) {
    auto [lo, hi] = snapshots.equal_range(applied);
    for (auto it = lo; it != hi; ++it) result.checkpoints[it->second] = state;
  };
  snapshot(0);
  for (std::size_t i = 0; i < circuit.components.size(); ++i) {
    const OpticalComponent& c = circuit.components[i];
    apply_in_place(state, c);
    for (const auto& port : c.outputs) {
      if (blocked.count(port)) state.set(port, Jones::Zero());
    }
    snapshot(i + 1);
  }
  result.output = std::move(state);
  return result;
}

std::map<std::string, double> port_powers(const OpticalCircuit& circuit,
                                          const std::set<std::string>& blocked) {
  return port_powers(circuit, ModeState::horizontal(circuit.input_port), blocked);
}

std::map<std::string, double> port_powers(const OpticalCircuit& circuit, const ModeState& input,
                                          const std::set<std::string>& blocked) {
  const double input_power = input.total_power();
  if (!(input_power > 0.0)) throw InputError("input state carries no power");
  const Propagation p = propagate(circuit, input, blocked);
  std::map<std::string, double> out;
  for (const auto& port : circuit.monitored_ports) out[port] = p.output.power(port) / input_power;
  return out;
}

OpticalCircuit build_dsi_filter(const FilterParams& params) {
  using namespace dsi;
  OpticalCircuit c;
  c.input_port = kInput;
  auto add = [&](ComponentKind kind, std::vector<std::string> in, std::vector<std::string> out,
                 std::string name) {
    c.components.push_back({std::move(kind), std::move(in), std::move(out), std::move(name)});
  };
  auto ring_mirrors = [&](const std::string& path, bool clockwise) {
    const char* order[] = {"M_T", "M_M", "M_R"};
    for (int k = 0; k < 3; ++k)
      add(params.mirror, {path}, {path}, std::string(order[clockwise ? 2 - k : k]) + "(" + path + ")");
  };

  add(params.input_polarizer, {kInput}, {"gt_out", "gt_reject"}, "GT");
  add(params.bs1, {"gt_out"}, {kPathA, kPathC}, "BS1 pass 1");
  c.checkpoints[kAfterFirstPass] = c.components.size();

  add(PhasePlate{params.glass_phase}, {kPathA}, {kPathA}, "GP");
  ring_mirrors(kPathA, false);
  add(HalfWavePlate{params.hwp1_angle}, {kPathC}, {kPathC}, "HWP1");
  ring_mirrors(kPathC, true);
  c.checkpoints[kBeforeSecondPass] = c.components.size();

  add(params.bs1, {kPathA, kPathC}, {kPathU, kPathL}, "BS1 pass 2");
  c.checkpoints[kAfterSecondPass] = c.components.size();

  add(params.pbs1, {kPathU}, {kPathU, "pbs1_reflect"}, "PBS1");
  add(HalfWavePlate{params.hwp3_angle}, {kPathU}, {kPathU}, "HWP3");
  add(params.bs2, {kPathU}, {kPathU, "bs2_tap"}, "BS2");
  add(HalfWavePlate{params.hwp2_angle}, {kPathL}, {kPathL}, "HWP2");
  add(params.pbs2, {kPathL, kPathU}, {kOutput, "pbs2_reflect"}, "PBS2");

  c.monitored_ports = {kOutput};
  c.validate();
  return c;
}

std::set<std::string> isolating_blocks(const History& h) {
  if (h.size() != 2) throw ContractViolation("the event filter isolates two-step histories only");
  return {h.site(0) == 0 ? dsi::kPathC : dsi::kPathA, h.site(1) == 0 ? dsi::kPathL : dsi::kPathU};
}

std::map<std::string, Jones> history_amplitudes_at_output(const OpticalCircuit& circuit) {
  std::map<std::string, Jones> out;
  const ModeState input = ModeState::horizontal(circuit.input_port);
  for (const History& h : HistorySpace(2)) {
    const Propagation p = propagate(circuit, input, isolating_blocks(h));
    out[h.to_string()] = p.output.at(dsi::kOutput);
  }
  return out;
}

HopperModel<double> equivalent_hopper_model(const FilterParams& params) {
  // The filter's history 00 transmits twice at BS1 while the hopper's 00
  // reflects twice, so t and r trade places; the glass plate adds its phase
  // to the first-step branch that leads into 01.
  const BeamSplitter& bs = params.bs1;
  return HopperModel<double>({{bs.r, bs.t, bs.phi + params.glass_phase}, {bs.r, bs.t, bs.phi}});
}

}  // namespace qmeasure::optics
