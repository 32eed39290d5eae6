#pragma once

// JSON documents for models, events, netlists and filter parameters.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qmeasure/histories.hpp"
#include "qmeasure/optics.hpp"

namespace qmeasure::io {

using nlohmann::json;

/// Parses `text`; a syntax error becomes a ParseError that names `source`
/// with the 1-based line and column of the offending byte.
json parse_json(std::string_view text, const std::string& source = "<input>");
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// {"steps": [{"t", "r", "phi"}, ...], "role_table": ["stay" | "switch", ...]}
HopperModel<double> model_from_json(const json& doc);
json model_to_json(const HopperModel<double>& model);

/// ["00", "01", "11"]
Event event_from_json(const json& doc);
json event_to_json(const Event& e);

/// {"input_port", "monitored_ports", "checkpoints", "components": [{"kind",
/// "name", "inputs", "outputs", "params": {...}}]}.  Every behavior parameter
/// of a component is required.
optics::OpticalCircuit circuit_from_json(const json& doc);
json circuit_to_json(const optics::OpticalCircuit& circuit);

optics::FilterParams filter_params_from_json(const json& doc);
json filter_params_to_json(const optics::FilterParams& params);

}  // namespace qmeasure::io
