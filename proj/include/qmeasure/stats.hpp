#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace qmeasure::stats {

/// Percentile bounds of the +-1 sigma band quoted around a median.
inline constexpr double kUpperPercentile = 84.13;
inline constexpr double kLowerPercentile = 15.87;

/// Linear-interpolation percentile (q in [0, 100]) of an ascending sample.
double percentile_sorted(std::span<const double> sorted, double q);
double percentile(std::vector<double> samples, double q);
double median(std::vector<double> samples);
double mean(std::span<const double> samples);
/// Sample standard deviation with the n - 1 denominator; 0 for n < 2.
double sample_std(std::span<const double> samples);

/// Samples summarised by their median and asymmetric percentile spread.
struct MeasureDistribution {
  std::vector<double> samples;
  double median = 0.0;
  /// 84.13th percentile minus the median.
  double sigma_plus = 0.0;
  /// Median minus the 15.87th percentile.
  double sigma_minus = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;

  /// Throws InputError on an empty sample.
  static MeasureDistribution from_samples(std::vector<double> samples);

  std::size_t size() const noexcept { return samples.size(); }
};

struct HistogramBin {
  double left;
  double right;
  std::size_t count;
};

/// Freedman-Diaconis bin count, at least 1.
std::size_t freedman_diaconis_bins(std::span<const double> samples);
/// Equal-width histogram over [min, max]; `bins` defaults to Freedman-Diaconis.
std::vector<HistogramBin> histogram(std::span<const double> samples,
                                    std::optional<std::size_t> bins = std::nullopt);

/// Generator for draw `index` of a run seeded with `seed`.  Draws are
/// independent of each other and of evaluation order.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Calls `body(begin, end)` over disjoint chunks of [0, n) on worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qmeasure::stats
