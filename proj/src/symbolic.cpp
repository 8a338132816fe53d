#include "reclab/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include <json.hpp>

#include "reclab/error.hpp"

namespace reclab {

Alphabet Alphabet::finite(std::uint32_t size) {
  // A singleton alphabet makes every cylinder trivial.
  require(size >= 2, "alphabet must have at least two symbols");
  return Alphabet{size, false};
}

Alphabet Alphabet::integers() { return Alphabet{0, true}; }

Word::Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  require(!symbols_.empty(), "word must be nonempty");
}

Word::Word(std::initializer_list<Symbol> symbols)
    : Word(std::vector<Symbol>(symbols)) {}

Word Word::parse(std::string_view text) {
  auto first = text.find_first_not_of(" \t\n");
  require(first != std::string_view::npos, "empty word");
  text.remove_prefix(first);
  std::vector<Symbol> out;
  if (text.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::invalid_input, std::string("bad word array: ") + e.what());
    }
    require(j.is_array(), "word JSON must be an array");
    for (const auto& v : j) {
      require(v.is_number_unsigned() ||
                  (v.is_number_integer() && v.get<std::int64_t>() >= 0),
              "word symbols must be nonnegative integers");
      out.push_back(v.get<Symbol>());
    }
  } else {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
      text.remove_suffix(1);
    for (char c : text) {
      require(c >= '0' && c <= '9', "compact words use the digits 0-9 only");
      out.push_back(static_cast<Symbol>(c - '0'));
    }
  }
  return Word(std::move(out));
}

Symbol Word::max_symbol() const noexcept {
  return *std::max_element(symbols_.begin(), symbols_.end());
}

void Word::validate(const Alphabet& alphabet) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!alphabet.contains(symbols_[i])) {
      fail(ErrorCode::invalid_input,
           "symbol " + std::to_string(symbols_[i]) + " at position " +
               std::to_string(i) + " is outside the alphabet of size " +
               std::to_string(alphabet.size));
    }
  }
}

Word Word::prefix(std::size_t length) const {
  require(length >= 1 && length <= symbols_.size(), "prefix length out of range");
  return Word(std::vector<Symbol>(symbols_.begin(),
                                  symbols_.begin() + static_cast<std::ptrdiff_t>(length)));
}

Word Word::concat(const Word& tail) const {
  std::vector<Symbol> out(symbols_);
  out.insert(out.end(), tail.symbols_.begin(), tail.symbols_.end());
  return Word(std::move(out));
}

std::string Word::to_compact() const {
  std::string s;
  s.reserve(symbols_.size());
  for (Symbol x : symbols_) {
    require(x < 10, "compact form needs symbols below 10");
    s.push_back(static_cast<char>('0' + x));
  }
  return s;
}

std::string Word::to_json() const { return nlohmann::json(symbols_).dump(); }

std::vector<std::size_t> border_array(std::span<const Symbol> w) {
  std::vector<std::size_t> border(w.size() + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    while (k > 0 && w[i] != w[k]) k = border[k];
    if (w[i] == w[k]) ++k;
    border[i + 1] = k;
  }
  return border;
}

std::size_t principal_period(const Word& w) {
  const auto border = border_array(w.symbols());
  return w.size() - border.back();
}

std::vector<std::size_t> overlap_set(const Word& w) {
  // k overlaps iff n - k is a border length (k = n: the empty border).
  const auto border = border_array(w.symbols());
  const std::size_t n = w.size();
  std::vector<std::size_t> out;
  for (std::size_t b = border[n];; b = border[b]) {
    out.push_back(n - b);
    if (b == 0) break;
  }
  return out;  // border chain is strictly decreasing, so shifts ascend
}

Word periodic_extension(const Word& r_word, std::size_t n) {
  require(n >= 1, "periodic extension length must be at least 1");
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = r_word[i % r_word.size()];
  return Word(std::move(out));
}

PeriodProfile prefix_period_profile(const Word& w) {
  const auto border = border_array(w.symbols());
  PeriodProfile profile;
  profile.values.reserve(w.size());
  for (std::size_t k = 1; k <= w.size(); ++k) profile.values.push_back(k - border[k]);
  return profile;
}

Word thue_morse(std::size_t n) {
  require(n >= 1, "Thue-Morse prefix length must be at least 1");
  std::vector<Symbol> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<Symbol>(std::popcount(static_cast<std::uint64_t>(i)) & 1);
  return Word(std::move(out));
}

Word ones(std::size_t n) {
  require(n >= 1, "word length must be at least 1");
  return Word(std::vector<Symbol>(n, 1));
}

}  // namespace reclab
