#include "qmeasure/traces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qmeasure/errors.hpp"
#include "qmeasure/io.hpp"

namespace qmeasure {

namespace {

constexpr std::array<std::string_view, 8> kLabelNames = {"P_I",  "P_E",  "P_int", "P_00",
                                                         "P_01", "P_11", "P_T",   "P_R"};

double parse_double(std::string_view field, const std::string& where) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(where + ": '" + std::string(field) + "' is not a number");
  return value;
}

}  // namespace

std::string to_string(TraceLabel label) {
  return std::string(kLabelNames[static_cast<std::size_t>(label)]);
}

TraceLabel parse_trace_label(std::string_view text) {
  for (std::size_t k = 0; k < kLabelNames.size(); ++k) {
    if (kLabelNames[k] == text) return static_cast<TraceLabel>(k);
  }
  throw ValidationError("unknown trace label '" + std::string(text) + "'");
}

PowerTrace::PowerTrace(TraceLabel label, std::vector<double> timestamps,
                       std::vector<double> powers)
    : label_(label), timestamps_(std::move(timestamps)), powers_(std::move(powers)) {
  const std::string name = to_string(label_);
  if (timestamps_.empty()) throw InputError("trace " + name + " is empty");
  if (timestamps_.size() != powers_.size())
    throw InputError("trace " + name + " has mismatched timestamp and power counts");
  for (std::size_t k = 0; k < size(); ++k) {
    if (!std::isfinite(timestamps_[k]) || !std::isfinite(powers_[k]))
      throw InputError("trace " + name + " holds a non-finite value at row " + std::to_string(k));
    if (powers_[k] < 0.0)
      throw InputError("trace " + name + " holds a negative power at row " + std::to_string(k));
    if (k > 0 && !(timestamps_[k] > timestamps_[k - 1]))
      throw InputError("trace " + name + " timestamps are not strictly increasing at row " +
                       std::to_string(k));
  }
  prefix_.resize(size() + 1, 0.0);
  for (std::size_t k = 0; k < size(); ++k) prefix_[k + 1] = prefix_[k] + powers_[k];
}

double PowerTrace::mean_power() const { return prefix_.back() / static_cast<double>(size()); }

std::optional<double> PowerTrace::window_mean(double start, double width) const {
  const auto first = std::lower_bound(timestamps_.begin(), timestamps_.end(), start);
  const auto last = std::lower_bound(first, timestamps_.end(), start + width);
  const auto lo = static_cast<std::size_t>(first - timestamps_.begin());
  const auto hi = static_cast<std::size_t>(last - timestamps_.begin());
  if (hi <= lo) return std::nullopt;
  return (prefix_[hi] - prefix_[lo]) / static_cast<double>(hi - lo);
}

const PowerTrace& require_trace(const TraceSet& traces, TraceLabel label) {
  const auto it = traces.find(label);
  if (it == traces.end()) throw InputError("missing trace " + to_string(label));
  return it->second;
}

std::string trace_to_csv(const PowerTrace& trace) {
  std::ostringstream out;
  out << kTraceCsvHeader << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < trace.size(); ++k)
    out << trace.timestamps()[k] << ',' << trace.powers()[k] << '\n';
  return out.str();
}

PowerTrace trace_from_csv(std::string_view text, TraceLabel label, const std::string& source) {
  std::vector<double> t;
  std::vector<double> p;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (!header_seen) {
      if (line != kTraceCsvHeader)
        throw ParseError(where + ": expected header '" + std::string(kTraceCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(where + ": expected two comma separated fields");
    t.push_back(parse_double(line.substr(0, comma), where));
    p.push_back(parse_double(line.substr(comma + 1), where));
  }
  if (!header_seen) throw ParseError(source + ": missing header");
  return PowerTrace(label, std::move(t), std::move(p));
}

PowerTrace read_trace_csv(const std::filesystem::path& path, TraceLabel label) {
  return trace_from_csv(io::read_text_file(path), label, path.string());
}

void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace) {
  io::write_text_file(path, trace_to_csv(trace));
}

TraceSet read_manifest(const std::filesystem::path& manifest_path) {
  const io::json doc = io::read_json_file(manifest_path);
  if (!doc.is_object()) throw ParseError(manifest_path.string() + ": manifest must be an object");
  const std::filesystem::path base = manifest_path.parent_path();
  TraceSet traces;
  for (const auto& [key, value] : doc.items()) {
    const TraceLabel label = parse_trace_label(key);
    if (!value.is_string())
      throw ParseError(manifest_path.string() + ": path for " + key + " must be a string");
    std::filesystem::path file = value.get<std::string>();
    if (file.is_relative()) file = base / file;
    traces.emplace(label, read_trace_csv(file, label));
  }
  return traces;
}

std::filesystem::path write_trace_set(const std::filesystem::path& directory,
                                      const TraceSet& traces) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create '" + directory.string() + "': " + ec.message());
  io::json manifest = io::json::object();
  for (const auto& [label, trace] : traces) {
    const std::string file = to_string(label) + ".csv";
    write_trace_csv(directory / file, trace);
    manifest[to_string(label)] = file;
  }
  const std::filesystem::path manifest_path = directory / "manifest.json";
  io::write_text_file(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

}  // namespace qmeasure
