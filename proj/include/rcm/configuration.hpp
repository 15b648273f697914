#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rcm {

/// Open/closed state of every edge of a region, indexed by canonical edge index.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t edge_count, bool open = false)
      : states_(edge_count, open ? 1 : 0) {}

  /// Bit e of `bits` is the state of edge e. Requires edge_count <= 64.
  static Configuration from_bits(std::uint64_t bits, std::size_t edge_count) {
    if (edge_count > 64) throw std::invalid_argument("from_bits: more than 64 edges");
    Configuration c(edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) c.states_[e] = (bits >> e) & 1u;
    return c;
  }

  std::uint64_t to_bits() const {
    if (states_.size() > 64) throw std::invalid_argument("to_bits: more than 64 edges");
    std::uint64_t bits = 0;
    for (std::size_t e = 0; e < states_.size(); ++e)
      bits |= static_cast<std::uint64_t>(states_[e] & 1u) << e;
    return bits;
  }

  /// Overwrites the states from `bits` without reallocating.
  void assign_bits(std::uint64_t bits) {
    for (std::size_t e = 0; e < states_.size(); ++e) states_[e] = (bits >> e) & 1u;
  }

  std::size_t size() const noexcept { return states_.size(); }
  bool open(std::size_t e) const { return states_[e] != 0; }
  bool operator[](std::size_t e) const { return states_[e] != 0; }
  void set(std::size_t e, bool open) { states_[e] = open ? 1 : 0; }

  std::size_t open_count() const noexcept {
    std::size_t n = 0;
    for (auto s : states_) n += s;
    return n;
  }

  /// Product partial order: every edge open here is open in `other`.
  bool is_below(const Configuration& other) const {
    if (other.size() != size()) throw std::invalid_argument("is_below: size mismatch");
    for (std::size_t e = 0; e < states_.size(); ++e)
      if (states_[e] > other.states_[e]) return false;
    return true;
  }

  std::span<const std::uint8_t> states() const noexcept { return states_; }
  std::span<std::uint8_t> states() noexcept { return states_; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::uint8_t> states_;
};

/// An event, as a predicate on configurations of a fixed region.
using Event = std::function<bool(const Configuration&)>;

}  // namespace rcm
