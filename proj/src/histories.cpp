#include "qmeasure/histories.hpp"

#include <algorithm>
#include <array>

namespace qmeasure {

History::History(std::uint32_t bits, std::size_t length)
    : length_(static_cast<std::uint32_t>(length)), bits_(bits) {
  if (length == 0 || length > 32)
    throw ValidationError("history length must be between 1 and 32");
  if (length < 32 && (bits >> length) != 0)
    throw ValidationError("history bits exceed its length");
}

History History::from_string(std::string_view sites) {
  if (sites.empty()) throw ValidationError("empty history string");
  if (sites.size() > 32)
    throw ValidationError("history '" + std::string(sites) + "' is too long");
  std::uint32_t bits = 0;
  for (char c : sites) {
    if (c != '0' && c != '1')
      throw ValidationError("history '" + std::string(sites) +
                            "' contains a site label other than 0 or 1");
    bits = (bits << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return History(bits, sites.size());
}

int History::site(std::size_t step) const {
  if (step >= length_) throw ContractViolation("history step out of range");
  return static_cast<int>((bits_ >> (length_ - 1 - step)) & 1u);
}

std::string History::to_string() const {
  std::string s(length_, '0');
  for (std::size_t k = 0; k < length_; ++k) s[k] = site(k) ? '1' : '0';
  return s;
}

HistorySpace::HistorySpace(std::size_t n_steps, std::size_t max_steps)
    : n_steps_(n_steps) {
  if (n_steps == 0) throw ConfigError("history space needs at least one step");
  if (n_steps > max_steps)
    throw ConfigError("history space of " + std::to_string(n_steps) +
                      " steps exceeds the limit of " + std::to_string(max_steps));
  if (n_steps > 31) throw ConfigError("history spaces above 31 steps are not supported");
  const std::uint32_t count = std::uint32_t{1} << n_steps;
  histories_.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits)
    histories_.emplace_back(bits, n_steps);
}

Event::Event(std::vector<History> members, std::optional<std::string> label)
    : members_(std::move(members)), label_(std::move(label)) {
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (members_[i].size() != members_[0].size())
      throw ValidationError("event mixes histories of different lengths (" +
                            members_[0].to_string() + ", " +
                            members_[i].to_string() + ")");
  }
  const auto dup = std::adjacent_find(members_.begin(), members_.end());
  if (dup != members_.end())
    throw ValidationError("duplicate history " + dup->to_string() + " in event");
}

Event Event::from_strings(std::span<const std::string> sites,
                          std::optional<std::string> label) {
  std::vector<History> members;
  members.reserve(sites.size());
  for (const auto& s : sites) members.push_back(History::from_string(s));
  return Event(std::move(members), std::move(label));
}

Event Event::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view piece = text.substr(start, comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) parts.emplace_back(piece);
    else if (comma < text.size())
      throw ValidationError("empty history in event list '" + std::string(text) + "'");
    start = comma + 1;
  }
  return from_strings(parts);
}

Event Event::complement(const HistorySpace& space) const {
  if (!subset_of(space)) throw ContractViolation("event is not part of this history space");
  std::vector<History> rest;
  std::set_difference(space.begin(), space.end(), members_.begin(), members_.end(),
                      std::back_inserter(rest));
  return Event(std::move(rest));
}

bool Event::contains(const History& h) const {
  return std::binary_search(members_.begin(), members_.end(), h);
}

bool Event::subset_of(const HistorySpace& space) const noexcept {
  return empty() || members_.front().size() == space.n_steps();
}

std::vector<std::string> Event::to_strings() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (const auto& h : members_) out.push_back(h.to_string());
  return out;
}

bool is_serial(const Event& e, const HistorySpace& space) {
  if (!e.subset_of(space)) throw ContractViolation("event is not part of this history space");
  if (e.empty()) return true;
  // e always lies inside the product of its projections, so equal sizes
  // mean equal sets.
  double product_size = 1.0;
  for (std::size_t k = 0; k < space.n_steps(); ++k) {
    std::array<bool, 2> seen{false, false};
    for (const History& h : e) seen[h.site(k)] = true;
    product_size *= static_cast<double>(seen[0] + seen[1]);
  }
  return product_size == static_cast<double>(e.size());
}

}  // namespace qmeasure
