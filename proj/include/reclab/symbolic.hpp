#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reclab {

using Symbol = std::uint32_t;

/// Finite alphabet {0, ..., size-1}, or the countable alphabet of all
/// nonnegative integers when `countable` is set.
struct Alphabet {
  std::uint32_t size = 2;
  bool countable = false;

  static Alphabet finite(std::uint32_t size);
  static Alphabet integers();

  bool contains(Symbol s) const noexcept { return countable || s < size; }
};

/// A nonempty string of symbol indices. Stands for the cylinder set of all
/// sequences starting with it; also used for sampled paths.
class Word {
 public:
  explicit Word(std::vector<Symbol> symbols);
  Word(std::initializer_list<Symbol> symbols);

  /// Accepts a JSON array ("[1,0,1]") or a compact digit string ("101").
  static Word parse(std::string_view text);

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol max_symbol() const noexcept;

  /// Throws invalid_input if a symbol lies outside the alphabet.
  void validate(const Alphabet& alphabet) const;

  Word prefix(std::size_t length) const;
  Word concat(const Word& tail) const;

  std::string to_compact() const;  // only for symbols < 10
  std::string to_json() const;

  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Shortest-period profile r_1, ..., r_m of the prefixes of a word.
struct PeriodProfile {
  std::vector<std::size_t> values;
};

/// Border (failure) array: border[k] is the length of the longest proper
/// border of the prefix of length k, for k = 0..n. border[0] = 0.
std::vector<std::size_t> border_array(std::span<const Symbol> w);

/// Least k in {1..n} such that [w] and T^{-k}[w] intersect on the full shift,
/// i.e. the shortest period of w. Linear time.
std::size_t principal_period(const Word& w);

/// All k in {1..n} for which [w] overlaps its k-shift, ascending.
/// Always contains n; its minimum is principal_period(w).
std::vector<std::size_t> overlap_set(const Word& w);

/// Length-n cyclic repetition of r_word: out[i] = r_word[i mod r].
Word periodic_extension(const Word& r_word, std::size_t n);

PeriodProfile prefix_period_profile(const Word& w);

/// First n symbols of the Thue-Morse sequence 0110100110010110...
Word thue_morse(std::size_t n);

/// Word of n ones.
Word ones(std::size_t n);

}  // namespace reclab
