#include "qmeasure/io.hpp"

#include <fstream>
#include <sstream>

namespace qmeasure::io {

namespace {

using optics::BeamSplitter;
using optics::HalfWavePlate;
using optics::Mirror;
using optics::PhasePlate;
using optics::Polarizer;
using optics::PolarizingBS;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing parameter '" + where + "." + key + "'");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ConfigError("parameter '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::vector<std::string> strings(const json& obj, const std::string& key,
                                 const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array()) throw ConfigError("'" + where + "." + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string())
      throw ConfigError("'" + where + "." + key + "' must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

BeamSplitter splitter_from(const json& p, const std::string& where) {
  return {number(p, "t", where), number(p, "r", where), number(p, "phi", where),
          number(p, "eta_s", where)};
}

PolarizingBS pbs_from(const json& p, const std::string& where) {
  return {number(p, "extinction_T", where), number(p, "extinction_R", where)};
}

Mirror mirror_from(const json& p, const std::string& where) {
  return {number(p, "R_s", where), number(p, "R_p", where), number(p, "phase_s", where),
          number(p, "phase_p", where)};
}

Polarizer polarizer_from(const json& p, const std::string& where) {
  return {number(p, "axis", where), number(p, "extinction", where)};
}

json params_json(const optics::ComponentKind& kind) {
  return std::visit(
      overloaded{
          [](const BeamSplitter& b) {
            return json{{"t", b.t}, {"r", b.r}, {"phi", b.phi}, {"eta_s", b.eta_s}};
          },
          [](const PolarizingBS& p) {
            return json{{"extinction_T", p.extinction_T}, {"extinction_R", p.extinction_R}};
          },
          [](const HalfWavePlate& h) { return json{{"theta", h.theta}}; },
          [](const PhasePlate& p) { return json{{"phase", p.phase}}; },
          [](const Mirror& m) {
            return json{{"R_s", m.R_s}, {"R_p", m.R_p}, {"phase_s", m.phase_s},
                        {"phase_p", m.phase_p}};
          },
          [](const Polarizer& p) { return json{{"axis", p.axis}, {"extinction", p.extinction}}; },
      },
      kind);
}

optics::ComponentKind kind_from(const std::string& kind, const json& p, const std::string& where) {
  if (kind == "BeamSplitter") return splitter_from(p, where);
  if (kind == "PolarizingBS") return pbs_from(p, where);
  if (kind == "HalfWavePlate") return HalfWavePlate{number(p, "theta", where)};
  if (kind == "PhasePlate") return PhasePlate{number(p, "phase", where)};
  if (kind == "Mirror") return mirror_from(p, where);
  if (kind == "Polarizer") return polarizer_from(p, where);
  throw ConfigError("unknown component kind '" + kind + "' at " + where);
}

}  // namespace

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": malformed JSON");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

HopperModel<double> model_from_json(const json& doc) {
  const json& steps = require(doc, "steps", "model");
  if (!steps.is_array()) throw ConfigError("'model.steps' must be an array");
  std::vector<BeamsplitterParams<double>> params;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "model.steps[" + std::to_string(i) + "]";
    params.push_back({number(steps[i], "t", where), number(steps[i], "r", where),
                      number(steps[i], "phi", where)});
  }
  std::vector<StepRole> roles;
  if (const auto it = doc.find("role_table"); it != doc.end() && !it->is_null()) {
    for (const auto& name : strings(doc, "role_table", "model")) {
      if (name == "stay") roles.push_back(StepRole::ReflectStays);
      else if (name == "switch") roles.push_back(StepRole::ReflectSwitches);
      else throw ConfigError("role_table entries must be \"stay\" or \"switch\", got '" + name + "'");
    }
  }
  std::size_t max_steps = kDefaultMaxSteps;
  if (const auto it = doc.find("max_steps"); it != doc.end())
    max_steps = static_cast<std::size_t>(number(doc, "max_steps", "model"));
  return HopperModel<double>(std::move(params), std::move(roles), max_steps);
}

json model_to_json(const HopperModel<double>& model) {
  json steps = json::array();
  for (const auto& s : model.steps()) steps.push_back({{"t", s.t}, {"r", s.r}, {"phi", s.phi}});
  json roles = json::array();
  for (StepRole role : model.roles())
    roles.push_back(role == StepRole::ReflectStays ? "stay" : "switch");
  return {{"steps", steps}, {"role_table", roles}};
}

Event event_from_json(const json& doc) {
  if (!doc.is_array()) throw ValidationError("an event must be an array of bit-strings");
  std::vector<std::string> sites;
  for (const auto& s : doc) {
    if (!s.is_string()) throw ValidationError("event members must be bit-strings");
    sites.push_back(s.get<std::string>());
  }
  return Event::from_strings(sites);
}

json event_to_json(const Event& e) { return e.to_strings(); }

optics::OpticalCircuit circuit_from_json(const json& doc) {
  optics::OpticalCircuit c;
  if (!doc.is_object()) throw ConfigError("netlist must be a JSON object");
  if (const auto it = doc.find("input_port"); it != doc.end()) c.input_port = it->get<std::string>();
  if (doc.contains("monitored_ports")) c.monitored_ports = strings(doc, "monitored_ports", "netlist");
  if (const auto it = doc.find("checkpoints"); it != doc.end()) {
    for (const auto& [name, count] : it->items()) c.checkpoints[name] = count.get<std::size_t>();
  }
  const json& components = require(doc, "components", "netlist");
  if (!components.is_array()) throw ConfigError("'netlist.components' must be an array");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const std::string where = "components[" + std::to_string(i) + "]";
    const json& item = components[i];
    const json& kind = require(item, "kind", where);
    if (!kind.is_string()) throw ConfigError("'" + where + ".kind' must be a string");
    const json& params = require(item, "params", where);
    optics::OpticalComponent comp{kind_from(kind.get<std::string>(), params, where + ".params"),
                                  strings(item, "inputs", where), strings(item, "outputs", where),
                                  item.value("name", std::string{})};
    c.components.push_back(std::move(comp));
  }
  c.validate();
  return c;
}

json circuit_to_json(const optics::OpticalCircuit& circuit) {
  json components = json::array();
  for (const auto& comp : circuit.components) {
    components.push_back({{"kind", comp.kind_name()},
                          {"name", comp.name},
                          {"inputs", comp.inputs},
                          {"outputs", comp.outputs},
                          {"params", params_json(comp.kind)}});
  }
  json checkpoints = json::object();
  for (const auto& [name, count] : circuit.checkpoints) checkpoints[name] = count;
  return {{"input_port", circuit.input_port},
          {"monitored_ports", circuit.monitored_ports},
          {"checkpoints", checkpoints},
          {"components", components}};
}

optics::FilterParams filter_params_from_json(const json& doc) {
  const std::string w = "filter";
  optics::FilterParams p;
  p.input_polarizer = polarizer_from(require(doc, "input_polarizer", w), w + ".input_polarizer");
  p.bs1 = splitter_from(require(doc, "bs1", w), w + ".bs1");
  p.glass_phase = number(doc, "glass_phase", w);
  p.hwp1_angle = number(doc, "hwp1_angle", w);
  p.hwp2_angle = number(doc, "hwp2_angle", w);
  p.hwp3_angle = number(doc, "hwp3_angle", w);
  p.mirror = mirror_from(require(doc, "mirror", w), w + ".mirror");
  p.pbs1 = pbs_from(require(doc, "pbs1", w), w + ".pbs1");
  p.pbs2 = pbs_from(require(doc, "pbs2", w), w + ".pbs2");
  p.bs2 = splitter_from(require(doc, "bs2", w), w + ".bs2");
  return p;
}

json filter_params_to_json(const optics::FilterParams& p) {
  return {{"input_polarizer", params_json(p.input_polarizer)},
          {"bs1", params_json(p.bs1)},
          {"glass_phase", p.glass_phase},
          {"hwp1_angle", p.hwp1_angle},
          {"hwp2_angle", p.hwp2_angle},
          {"hwp3_angle", p.hwp3_angle},
          {"mirror", params_json(p.mirror)},
          {"pbs1", params_json(p.pbs1)},
          {"pbs2", params_json(p.pbs2)},
          {"bs2", params_json(p.bs2)}};
}

}  // namespace qmeasure::io
