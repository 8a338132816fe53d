#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "reclab/error.hpp"
#include "reclab/symbolic.hpp"

using namespace reclab;

namespace {

Word binary_word(std::uint32_t bits, std::size_t n) {
  std::vector<Symbol> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1u;
  return Word(s);
}

// Quadratic scan: shift k overlaps iff w[i] == w[i + k] wherever both exist.
bool overlaps_at(const Word& w, std::size_t k) {
  for (std::size_t i = 0; i + k < w.size(); ++i)
    if (w[i] != w[i + k]) return false;
  return true;
}

}  // namespace

TEST(Word, ParsesCompactAndJson) {
  EXPECT_EQ(Word::parse("0110"), (Word{0, 1, 1, 0}));
  EXPECT_EQ(Word::parse("[3, 0, 12]"), (Word{3, 0, 12}));
  EXPECT_EQ(Word::parse("  101 "), (Word{1, 0, 1}));
  EXPECT_THROW(Word::parse(""), Error);
  EXPECT_THROW(Word::parse("01a"), Error);
  EXPECT_THROW(Word::parse("[]"), Error);
  EXPECT_THROW(Word(std::vector<Symbol>{}), Error);
}

TEST(Word, ValidatesAgainstAlphabet) {
  const Word w{0, 2, 1};
  EXPECT_NO_THROW(w.validate(Alphabet::finite(3)));
  EXPECT_THROW(w.validate(Alphabet::finite(2)), Error);
  EXPECT_NO_THROW(w.validate(Alphabet::integers()));
  EXPECT_EQ(w.max_symbol(), 2u);
}

TEST(Word, PrefixConcatAndForms) {
  const Word w{1, 0, 1, 1};
  EXPECT_EQ(w.prefix(2), (Word{1, 0}));
  EXPECT_EQ(w.prefix(2).concat(Word{0}), (Word{1, 0, 0}));
  EXPECT_EQ(w.to_compact(), "1011");
  EXPECT_EQ(w.to_json(), "[1,0,1,1]");
  EXPECT_THROW(w.prefix(0), Error);
  EXPECT_THROW(w.prefix(5), Error);
}

TEST(Period, KnownExamples) {
  EXPECT_EQ(principal_period(Word{1, 0, 1}), 2u);
  EXPECT_EQ(principal_period(ones(10)), 1u);
  EXPECT_EQ(principal_period(Word::parse("1000000000")), 10u);
  EXPECT_EQ(principal_period(Word::parse("0110100")), 6u);
  EXPECT_EQ(principal_period(thue_morse(12)), 10u);
  EXPECT_EQ(principal_period(thue_morse(6)), 5u);
  EXPECT_EQ(principal_period(Word{7}), 1u);
}

TEST(Period, OverlapSetExamples) {
  EXPECT_EQ(overlap_set(Word::parse("10101")), (std::vector<std::size_t>{2, 4, 5}));
  EXPECT_EQ(overlap_set(Word::parse("1000000000")), (std::vector<std::size_t>{10}));
  EXPECT_EQ(overlap_set(ones(3)), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Period, MatchesQuadraticScanUpToTen) {
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      const Word w = binary_word(bits, n);
      std::vector<std::size_t> expected;
      for (std::size_t k = 1; k <= n; ++k)
        if (overlaps_at(w, k)) expected.push_back(k);
      ASSERT_EQ(overlap_set(w), expected) << w.to_compact();
      ASSERT_EQ(principal_period(w), expected.front()) << w.to_compact();
    }
  }
}

TEST(Period, BorderArray) {
  const Word w = Word::parse("0101");
  EXPECT_EQ(border_array(w.symbols()), (std::vector<std::size_t>{0, 0, 0, 1, 2}));
}

TEST(Period, PeriodicExtensionAndProfile) {
  EXPECT_EQ(periodic_extension(Word{1, 0}, 5), (Word{1, 0, 1, 0, 1}));
  EXPECT_EQ(periodic_extension(Word{1}, 3), ones(3));
  EXPECT_THROW(periodic_extension(Word{1}, 0), Error);
  EXPECT_EQ(prefix_period_profile(Word::parse("0110")).values, (std::vector<std::size_t>{1, 2, 3, 3}));
}

TEST(Period, ThueMorsePrefix) {
  EXPECT_EQ(thue_morse(16), Word::parse("0110100110010110"));
  EXPECT_EQ(ones(4), (Word{1, 1, 1, 1}));
}
