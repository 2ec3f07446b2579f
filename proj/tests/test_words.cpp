#include <gtest/gtest.h>

#include <random>

#include "zlab/words.hpp"

using namespace zlab;

namespace {

Letter g(std::int64_t n) { return {Factor::G, n}; }
Letter h(std::int64_t n) { return {Factor::H, n}; }

// Normal form by repeated local rewriting until nothing changes.
std::vector<Letter> rewrite_oracle(std::vector<Letter> v) {
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Letter> next;
    for (const Letter& l : v) {
      if (l.element == 0) {
        changed = true;
        continue;
      }
      if (!next.empty() && next.back().factor == l.factor) {
        next.back().element += l.element;
        changed = true;
        continue;
      }
      next.push_back(l);
    }
    v = std::move(next);
  }
  return v;
}

std::vector<Letter> random_letters(std::mt19937_64& rng, std::size_t n) {
  std::vector<Letter> v;
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = static_cast<std::int64_t>(rng() % 7) - 3;
    v.push_back({(rng() & 1) ? Factor::G : Factor::H, e});
  }
  return v;
}

}  // namespace

TEST(Words, TextRoundTrip) {
  for (const char* s : {"1", "g:1", "h:-2", "g:1,h:-2,g:3", "h:1125899906842624"}) {
    EXPECT_EQ(to_string(parse_word(s)), s);
  }
}

TEST(Words, ParseRejectsMalformed) {
  EXPECT_THROW(parse_word(""), std::invalid_argument);
  EXPECT_THROW(parse_word("g:1,g:2"), std::invalid_argument);
  EXPECT_THROW(parse_word("g:0"), std::invalid_argument);
  EXPECT_THROW(parse_word("x:1"), std::invalid_argument);
  EXPECT_THROW(parse_word("g:1x"), std::invalid_argument);
  EXPECT_THROW(parse_word("g:1125899906842625"), std::invalid_argument);
}

TEST(Words, ReduceCancelsAndMerges) {
  EXPECT_EQ(reduce({g(1), g(-1)}), ReducedWord{});
  EXPECT_EQ(reduce({g(1), h(2), h(-2), g(3)}), parse_word("g:4"));
  EXPECT_EQ(reduce({h(0), g(2), h(0)}), parse_word("g:2"));
}

TEST(Words, ReduceMatchesRewriteOracle) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto raw = random_letters(rng, rng() % 12);
    const ReducedWord w = reduce(raw);
    EXPECT_EQ(w.letters(), rewrite_oracle(raw));
    EXPECT_TRUE(is_reduced(w.letters()));
  }
}

TEST(Words, GroupLaws) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const ReducedWord a = reduce(random_letters(rng, rng() % 8));
    const ReducedWord b = reduce(random_letters(rng, rng() % 8));
    const ReducedWord c = reduce(random_letters(rng, rng() % 8));
    EXPECT_EQ(concat(concat(a, b), c), concat(a, concat(b, c)));
    EXPECT_EQ(concat(a, a.inverse()), ReducedWord{});
    EXPECT_EQ(concat(a.inverse(), a), ReducedWord{});
    EXPECT_EQ(concat(a, ReducedWord{}), a);
  }
}

TEST(Words, PrefixAndLetterAccess) {
  const ReducedWord w = parse_word("g:1,h:-2,g:3");
  EXPECT_EQ(prefix(w, 0), ReducedWord{});
  EXPECT_EQ(prefix(w, 2), parse_word("g:1,h:-2"));
  EXPECT_THROW(prefix(w, 4), std::out_of_range);
  EXPECT_EQ(letter_at(w, 2), h(-2));
  EXPECT_FALSE(letter_at(ReducedWord{}, 0).has_value());
  EXPECT_THROW(letter_at(w, 4), std::out_of_range);
  EXPECT_EQ(common_prefix_length(w, parse_word("g:1,h:-2,g:4")), 2u);
  EXPECT_EQ(common_prefix_length(w, parse_word("h:1")), 0u);
}

TEST(Words, FromLettersValidates) {
  EXPECT_NO_THROW(ReducedWord::from_letters({g(1), h(1)}));
  EXPECT_THROW(ReducedWord::from_letters({g(1), g(1)}), std::invalid_argument);
  EXPECT_THROW(ReducedWord::from_letters({g(0)}), std::invalid_argument);
}

TEST(Words, IntegerDomainBound) {
  const auto& z = integers();
  EXPECT_TRUE(z.contains(IntegerGroup::kBound));
  EXPECT_FALSE(z.contains(IntegerGroup::kBound + 1));
  EXPECT_THROW(z.multiply(IntegerGroup::kBound, 1), std::invalid_argument);
  EXPECT_EQ(z.multiply(IntegerGroup::kBound, -1), IntegerGroup::kBound - 1);
}
