#pragma once

// Amplitude-level propagation of a single-photon (or coherent) mode state
// through a netlist of linear optical components.  A mode is a path label
// carrying a Jones vector over (H, V).

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qmeasure/errors.hpp"
#include "qmeasure/histories.hpp"
#include "qmeasure/jones.hpp"

namespace qmeasure::optics {

using Jones = jones::Vector<double>;
using JonesMatrix = jones::Matrix<double>;

enum class Polarization { H = 0, V = 1 };

class ModeState {
 public:
  ModeState() = default;

  /// Unit-power |H> on `path`.
  static ModeState horizontal(const std::string& path);

  bool contains(const std::string& path) const { return paths_.count(path) != 0; }
  const Jones& at(const std::string& path) const;
  std::complex<double> amplitude(const std::string& path, Polarization p) const;

  void set(const std::string& path, const Jones& j) { paths_[path] = j; }
  Jones take(const std::string& path);

  double power(const std::string& path) const;
  double total_power() const;

  const std::map<std::string, Jones>& paths() const noexcept { return paths_; }

 private:
  std::map<std::string, Jones> paths_;
};

struct BeamSplitter {
  double t = std::numbers::sqrt2 / 2;
  double r = std::numbers::sqrt2 / 2;
  double phi = std::numbers::pi / 2;
  /// Power transmittance of the substrate, applied once per traversal.
  double eta_s = 1.0;
};

/// Transmits H and reflects V.  `extinction_T` is the power fraction of V
/// leaking into the transmit port, `extinction_R` that of H leaking into the
/// reflect port.
struct PolarizingBS {
  double extinction_T = 0.0;
  double extinction_R = 0.0;
};

struct HalfWavePlate {
  double theta = 0.0;
};

struct PhasePlate {
  double phase = 0.0;
};

struct Mirror {
  double R_s = 1.0;
  double R_p = 1.0;
  double phase_s = 0.0;
  double phase_p = 0.0;
};

struct Polarizer {
  double axis = 0.0;
  double extinction = 0.0;
};

using ComponentKind =
    std::variant<BeamSplitter, PolarizingBS, HalfWavePlate, PhasePlate, Mirror, Polarizer>;

/// One placed component.  Two-port devices (BeamSplitter, PolarizingBS) take
/// one or two inputs (a missing second input is vacuum) and produce two
/// outputs.  A Polarizer produces a pass port and optionally a reject port.
/// The remaining kinds map one path to one path, which may keep its label.
struct OpticalComponent {
  ComponentKind kind;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string name;

  std::string kind_name() const;
  /// Throws ConfigError for unphysical parameters or WiringError for a port
  /// count that does not fit the kind.
  void validate() const;
};

ModeState apply_component(const ModeState& state, const OpticalComponent& c);

struct OpticalCircuit {
  std::vector<OpticalComponent> components;
  std::string input_port = "in";
  std::vector<std::string> monitored_ports;
  /// Named snapshots: the state after the first `value` components.
  std::map<std::string, std::size_t> checkpoints;

  /// Walks the netlist once, checking that every input is live exactly once
  /// and no output overwrites a live path.  Throws WiringError naming the
  /// component index.
  void validate() const;
  /// Every label produced by some component.
  std::set<std::string> internal_paths() const;
  /// Labels alive after the last component.
  std::vector<std::string> terminal_ports() const;
};

struct Propagation {
  ModeState output;
  std::map<std::string, ModeState> checkpoints;
};

/// Propagates `input` through `circuit`, zeroing every blocked path whenever
/// a component emits it.
Propagation propagate(const OpticalCircuit& circuit, const ModeState& input,
                      const std::set<std::string>& blocked = {});

/// Power at each monitored port divided by the input power, for a unit |H>
/// injected at the circuit input.
std::map<std::string, double> port_powers(const OpticalCircuit& circuit,
                                          const std::set<std::string>& blocked = {});
std::map<std::string, double> port_powers(const OpticalCircuit& circuit,
                                          const ModeState& input,
                                          const std::set<std::string>& blocked = {});

// Displaced Sagnac event filter for E = {00, 01, 11}.

struct FilterParams {
  Polarizer input_polarizer{};
  BeamSplitter bs1{};
  double glass_phase = 0.0;
  double hwp1_angle = std::numbers::pi / 4;
  double hwp2_angle = std::numbers::pi / 8;
  double hwp3_angle = std::numbers::pi / 4;
  Mirror mirror{};
  PolarizingBS pbs1{};
  PolarizingBS pbs2{};
  BeamSplitter bs2{};

  static FilterParams ideal() { return {}; }
};

namespace dsi {
inline constexpr const char* kInput = "in";
inline constexpr const char* kOutput = "PM";
inline constexpr const char* kPathA = "A";
inline constexpr const char* kPathC = "C";
inline constexpr const char* kPathU = "U";
inline constexpr const char* kPathL = "L";
inline constexpr const char* kAfterFirstPass = "psi1";
inline constexpr const char* kBeforeSecondPass = "psi2";
inline constexpr const char* kAfterSecondPass = "psi3";
}  // namespace dsi

/// GT polarizer, BS1 twice around the Sagnac ring (glass plate on A, HWP1 on
/// C, three mirrors per path), then PBS1 + HWP3 + BS2 on U and HWP2 on L,
/// recombined on PBS2 into the PM port.
OpticalCircuit build_dsi_filter(const FilterParams& params);

/// Paths blocked to isolate one two-step history at PM: the first site picks
/// A (0) or C (1), the second U (0) or L (1).
std::set<std::string> isolating_blocks(const History& h);

/// Jones vector arriving at PM along each of the histories 00, 01, 11, 10.
std::map<std::string, Jones> history_amplitudes_at_output(const OpticalCircuit& circuit);

/// Two-step hopper whose measure of {00, 01, 11} equals 2 P_E / (eta_s^2 P_I)
/// of a filter whose components other than BS1 and the glass plate are ideal.
HopperModel<double> equivalent_hopper_model(const FilterParams& params);

}  // namespace qmeasure::optics
