#pragma once

// Timestamped power recordings and their CSV / manifest files.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmeasure {

enum class TraceLabel { P_I, P_E, P_int, P_00, P_01, P_11, P_T, P_R };

inline constexpr std::array<TraceLabel, 8> kAllTraceLabels = {
    TraceLabel::P_I,  TraceLabel::P_E,  TraceLabel::P_int, TraceLabel::P_00,
    TraceLabel::P_01, TraceLabel::P_11, TraceLabel::P_T,   TraceLabel::P_R};

std::string to_string(TraceLabel label);
/// Throws ValidationError for an unknown label.
TraceLabel parse_trace_label(std::string_view text);

class PowerTrace {
 public:
  /// Throws InputError unless the trace is nonempty, timestamps strictly
  /// increase and powers are finite and nonnegative.
  PowerTrace(TraceLabel label, std::vector<double> timestamps, std::vector<double> powers);

  TraceLabel label() const noexcept { return label_; }
  std::size_t size() const noexcept { return timestamps_.size(); }
  std::span<const double> timestamps() const noexcept { return timestamps_; }
  std::span<const double> powers() const noexcept { return powers_; }
  double start_time() const noexcept { return timestamps_.front(); }
  double end_time() const noexcept { return timestamps_.back(); }
  double duration() const noexcept { return end_time() - start_time(); }
  double mean_power() const;

  /// Mean power of the samples stamped in [start, start + width), or nullopt
  /// if there are none.
  std::optional<double> window_mean(double start, double width) const;

 private:
  TraceLabel label_;
  std::vector<double> timestamps_;
  std::vector<double> powers_;
  std::vector<double> prefix_;  // prefix_[k] = sum of the first k powers
};

using TraceSet = std::map<TraceLabel, PowerTrace>;

/// Looks up `label`; throws InputError naming it when absent.
const PowerTrace& require_trace(const TraceSet& traces, TraceLabel label);

inline constexpr std::string_view kTraceCsvHeader = "timestamp_s,power_w";

/// "timestamp_s,power_w" rows, 17 significant digits.
std::string trace_to_csv(const PowerTrace& trace);
PowerTrace trace_from_csv(std::string_view text, TraceLabel label,
                          const std::string& source = "<csv>");
PowerTrace read_trace_csv(const std::filesystem::path& path, TraceLabel label);
void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace);

/// Manifest JSON maps labels to CSV paths, relative paths resolving against
/// the manifest's directory.  Only the labels present are loaded.
TraceSet read_manifest(const std::filesystem::path& manifest_path);
/// Writes one CSV per trace named "<label>.csv" plus "manifest.json".
std::filesystem::path write_trace_set(const std::filesystem::path& directory,
                                      const TraceSet& traces);

}  // namespace qmeasure
