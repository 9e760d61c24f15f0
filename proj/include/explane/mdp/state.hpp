#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace explane::mdp {

/// Truth assignment over the grounded atom universe of one task.
class State {
 public:
  State() = default;
  explicit State(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}
  State(std::size_t width, std::span<const int> true_atoms) : State(width) {
    for (int i : true_atoms) set(static_cast<std::size_t>(i));
  }

  std::size_t width() const { return width_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  bool contains_all(std::span<const int> atoms) const {
    for (int i : atoms)
      if (!test(static_cast<std::size_t>(i))) return false;
    return true;
  }

  std::vector<int> true_atoms() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < width_; ++i)
      if (test(i)) out.push_back(static_cast<int>(i));
    return out;
  }

  /// '0'/'1' per atom in universe order.
  std::string to_bits() const {
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  static State from_bits(const std::string& bits) {
    State s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i] == '1') s.set(i);
    return s;
  }

  std::size_t hash() const {
    std::size_t h = width_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

}  // namespace explane::mdp
