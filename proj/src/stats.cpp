#include "qmeasure/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "qmeasure/errors.hpp"

namespace qmeasure::stats {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw InputError("percentile must lie in [0, 100]");
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::vector<double> samples, double q) {
  std::sort(samples.begin(), samples.end());
  return percentile_sorted(samples, q);
}

double median(std::vector<double> samples) { return percentile(std::move(samples), 50.0); }

double mean(std::span<const double> samples) {
  if (samples.empty()) throw InputError("mean of an empty sample");
  return std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
}

double sample_std(std::span<const double> samples) {
  if (samples.size() < 2) return 0.0;
  const double m = mean(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(samples.size() - 1));
}

MeasureDistribution MeasureDistribution::from_samples(std::vector<double> samples) {
  if (samples.empty()) throw InputError("distribution needs at least one sample");
  MeasureDistribution d;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  d.median = percentile_sorted(sorted, 50.0);
  d.sigma_plus = std::max(0.0, percentile_sorted(sorted, kUpperPercentile) - d.median);
  d.sigma_minus = std::max(0.0, d.median - percentile_sorted(sorted, kLowerPercentile));
  d.mean = stats::mean(samples);
  d.std_dev = samples.size() > 1 ? stats::sample_std(samples) : 0.0;
  d.samples = std::move(samples);
  return d;
}

std::size_t freedman_diaconis_bins(std::span<const double> samples) {
  if (samples.size() < 2) return 1;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = percentile_sorted(sorted, 75.0) - percentile_sorted(sorted, 25.0);
  const double range = sorted.back() - sorted.front();
  if (!(iqr > 0.0) || !(range > 0.0)) return 1;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(range / width)), 1, 100000);
}

std::vector<HistogramBin> histogram(std::span<const double> samples,
                                    std::optional<std::size_t> bins) {
  if (samples.empty()) return {};
  const std::size_t n = bins.value_or(freedman_diaconis_bins(samples));
  if (n == 0) throw InputError("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = hi > lo ? (hi - lo) / static_cast<double>(n) : 0.0;
  std::vector<HistogramBin> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].left = lo + width * static_cast<double>(k);
    out[k].right = k + 1 == n ? hi : lo + width * static_cast<double>(k + 1);
    out[k].count = 0;
  }
  for (double x : samples) {
    std::size_t k = width > 0.0 ? static_cast<std::size_t>((x - lo) / width) : 0;
    out[std::min(k, n - 1)].count++;
  }
  return out;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, n / 256));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qmeasure::stats
