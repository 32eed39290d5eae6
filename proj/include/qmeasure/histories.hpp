#pragma once

// Histories, events and the quantum measure of a finite two-site hopper.
//
// A history is the sequence of site labels (0 or 1) a particle occupies after
// each beamsplitter.  Its amplitude is a product of per-step factors, and the
// measure of an event interferes only histories that share an endpoint.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmeasure/errors.hpp"

namespace qmeasure {

inline constexpr std::size_t kDefaultMaxSteps = 24;
inline constexpr double kUnitarityTolerance = 1e-12;

class History {
 public:
  History() = default;
  /// `bits` holds the site at step k in bit (length - 1 - k), so numeric order
  /// of `bits` is lexicographic order of the site string.
  History(std::uint32_t bits, std::size_t length);

  static History from_string(std::string_view sites);

  std::size_t size() const noexcept { return length_; }
  int site(std::size_t step) const;
  int endpoint() const { return site(length_ - 1); }
  std::uint32_t index() const noexcept { return bits_; }
  std::string to_string() const;

  auto operator<=>(const History&) const = default;

 private:
  std::uint32_t length_ = 0;
  std::uint32_t bits_ = 0;
};

/// All 2^n histories of an n-step hopper in lexicographic order.
class HistorySpace {
 public:
  explicit HistorySpace(std::size_t n_steps,
                        std::size_t max_steps = kDefaultMaxSteps);

  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return histories_.size(); }
  const std::vector<History>& histories() const noexcept { return histories_; }
  bool contains(const History& h) const noexcept { return h.size() == n_steps_; }

  auto begin() const noexcept { return histories_.begin(); }
  auto end() const noexcept { return histories_.end(); }

 private:
  std::size_t n_steps_;
  std::vector<History> histories_;
};

/// A set of equal-length histories kept in canonical sorted order.
class Event {
 public:
  Event() = default;
  /// Throws ValidationError on duplicates or mixed history lengths.
  explicit Event(std::vector<History> members,
                 std::optional<std::string> label = std::nullopt);

  static Event from_strings(std::span<const std::string> sites,
                            std::optional<std::string> label = std::nullopt);
  /// Comma separated list, e.g. "00,01,11". Empty text is the empty event.
  static Event parse(std::string_view text);

  /// Every history of `space` that is not in this event.
  Event complement(const HistorySpace& space) const;

  const std::vector<History>& members() const noexcept { return members_; }
  const std::optional<std::string>& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(const History& h) const;
  bool subset_of(const HistorySpace& space) const noexcept;
  std::vector<std::string> to_strings() const;

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool operator==(const Event& other) const { return members_ == other.members_; }

 private:
  std::vector<History> members_;
  std::optional<std::string> label_;
};

/// True iff `e` is the Cartesian product of its per-step site projections,
/// i.e. it can be selected by blocking paths step by step.
bool is_serial(const Event& e, const HistorySpace& space);

/// Which site change a step treats as the reflected branch.  The reference
/// two-step interferometer reflects when the particle stays on its site.
enum class StepRole { ReflectStays, ReflectSwitches };

template <typename Scalar = double>
struct BeamsplitterParams {
  Scalar t = Scalar(1);
  Scalar r = Scalar(0);
  Scalar phi = Scalar(0);

  /// Throws ConfigError unless 0 <= t, r <= 1 and t^2 + r^2 = 1 to 1e-12
  /// (or a few ulps of Scalar, if coarser).
  void validate() const {
    using std::isfinite;
    if (!isfinite(t) || !isfinite(r) || !isfinite(phi))
      throw ConfigError("beamsplitter parameters must be finite");
    if (t < Scalar(0) || t > Scalar(1) || r < Scalar(0) || r > Scalar(1))
      throw ConfigError("beamsplitter t and r must lie in [0, 1]");
    using std::abs;
    const Scalar tol = std::max(Scalar(kUnitarityTolerance),
                                Scalar(16) * std::numeric_limits<Scalar>::epsilon());
    if (abs(t * t + r * r - Scalar(1)) > tol)
      throw ConfigError("beamsplitter must satisfy t^2 + r^2 = 1");
  }

  std::complex<Scalar> reflection() const { return std::polar(r, phi); }
};

template <typename Scalar = double>
class HopperModel {
 public:
  using Params = BeamsplitterParams<Scalar>;

  explicit HopperModel(std::vector<Params> steps,
                       std::vector<StepRole> roles = {},
                       std::size_t max_steps = kDefaultMaxSteps)
      : steps_(std::move(steps)), roles_(std::move(roles)) {
    if (steps_.empty()) throw ConfigError("hopper model needs at least one step");
    if (steps_.size() > max_steps)
      throw ConfigError("hopper model has " + std::to_string(steps_.size()) +
                        " steps, above the configured limit of " +
                        std::to_string(max_steps));
    if (roles_.empty()) roles_.assign(steps_.size(), StepRole::ReflectStays);
    if (roles_.size() != steps_.size())
      throw ConfigError("role table length must equal the number of steps");
    for (const auto& s : steps_) s.validate();
  }

  /// Every step a 50:50 splitter with reflection phase pi/2.
  static HopperModel symmetric(std::size_t n_steps) {
    const Scalar half = Scalar(1) / std::sqrt(Scalar(2));
    const Scalar quarter_turn = std::acos(Scalar(0));
    return HopperModel(std::vector<Params>(n_steps, Params{half, half, quarter_turn}));
  }

  std::size_t n_steps() const noexcept { return steps_.size(); }
  const std::vector<Params>& steps() const noexcept { return steps_; }
  const std::vector<StepRole>& roles() const noexcept { return roles_; }

  /// Amplitude factor for moving from `from_site` to `to_site` at `step`.
  std::complex<Scalar> step_factor(std::size_t step, int from_site, int to_site) const {
    const bool stays = from_site == to_site;
    const bool reflected = (roles_[step] == StepRole::ReflectStays) == stays;
    return reflected ? steps_[step].reflection()
                     : std::complex<Scalar>(steps_[step].t, Scalar(0));
  }

 private:
  std::vector<Params> steps_;
  std::vector<StepRole> roles_;
};

template <typename Scalar>
HistorySpace enumerate_histories(const HopperModel<Scalar>& model,
                                 std::size_t max_steps = kDefaultMaxSteps) {
  return HistorySpace(model.n_steps(), max_steps);
}

/// Product of per-step factors along `h`; the particle enters on site 0.
template <typename Scalar>
std::complex<Scalar> amplitude(const HopperModel<Scalar>& model, const History& h) {
  if (h.size() != model.n_steps())
    throw ContractViolation("history " + h.to_string() + " has length " +
                            std::to_string(h.size()) + ", model has " +
                            std::to_string(model.n_steps()) + " steps");
  std::complex<Scalar> a(Scalar(1), Scalar(0));
  int previous = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const int site = h.site(k);
    a *= model.step_factor(k, previous, site);
    previous = site;
  }
  return a;
}

/// Amplitudes of every history, indexed by `History::index()`.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> amplitude_table(
    const HopperModel<Scalar>& model) {
  using Vec = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
  Vec table = Vec::Ones(1);
  for (std::size_t k = 0; k < model.n_steps(); ++k) {
    Vec next(table.size() * 2);
    for (Eigen::Index prefix = 0; prefix < table.size(); ++prefix) {
      const int previous = k == 0 ? 0 : static_cast<int>(prefix & 1);
      for (int site = 0; site < 2; ++site)
        next(2 * prefix + site) = table(prefix) * model.step_factor(k, previous, site);
    }
    table = std::move(next);
  }
  return table;
}

/// Summed amplitude per endpoint site: entry k is the sum of A(h) over the
/// members of `e` ending on site k.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 1> endpoint_amplitudes(
    const HopperModel<Scalar>& model, const Event& e) {
  Eigen::Matrix<std::complex<Scalar>, 2, 1> sums =
      Eigen::Matrix<std::complex<Scalar>, 2, 1>::Zero();
  for (const History& h : e) sums(h.endpoint()) += amplitude(model, h);
  return sums;
}

/// Quantum measure of `e`: the double sum of A(g)A*(g') over members that
/// share an endpoint, evaluated as a sum over endpoints of |sum A|^2.
template <typename Scalar>
Scalar measure(const HopperModel<Scalar>& model, const Event& e) {
  if (!e.empty() && e.members().front().size() != model.n_steps())
    throw ContractViolation("event histories have length " +
                            std::to_string(e.members().front().size()) +
                            ", model has " + std::to_string(model.n_steps()) +
                            " steps");
  return endpoint_amplitudes(model, e).squaredNorm();
}

}  // namespace qmeasure
