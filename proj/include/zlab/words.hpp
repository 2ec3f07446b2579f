#ifndef ZLAB_WORDS_HPP
#define ZLAB_WORDS_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zlab {

enum class Factor : std::uint8_t { G = 0, H = 1 };

inline Factor other(Factor f) { return f == Factor::G ? Factor::H : Factor::G; }
char factor_tag(Factor f);
Factor factor_from_tag(char c);

struct Letter {
  Factor factor = Factor::G;
  std::int64_t element = 0;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// Multiplication table of one factor group. Elements are 64-bit identifiers.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual std::string name() const = 0;
  virtual std::int64_t identity() const = 0;
  virtual std::int64_t multiply(std::int64_t a, std::int64_t b) const = 0;
  virtual std::int64_t inverse(std::int64_t a) const = 0;
  virtual bool contains(std::int64_t a) const = 0;
  bool is_identity(std::int64_t a) const { return a == identity(); }
};

// The integers under addition, restricted to |n| <= 2^50 so that sums of two
// in-domain elements never overflow and carrier images stay well separated.
class IntegerGroup final : public GroupModel {
 public:
  static constexpr std::int64_t kBound = std::int64_t{1} << 50;
  std::string name() const override { return "Z"; }
  std::int64_t identity() const override { return 0; }
  std::int64_t multiply(std::int64_t a, std::int64_t b) const override;
  std::int64_t inverse(std::int64_t a) const override { return -a; }
  bool contains(std::int64_t a) const override { return a >= -kBound && a <= kBound; }
};

const GroupModel& integers();

struct FactorGroups {
  const GroupModel* g = &integers();
  const GroupModel* h = &integers();
  const GroupModel& of(Factor f) const { return f == Factor::G ? *g : *h; }
};

// An element of G*H as an alternating sequence of non-identity letters.
// The empty sequence is the identity 1.
class ReducedWord {
 public:
  ReducedWord() = default;

  // Throws std::invalid_argument unless the letters already form a reduced word.
  static ReducedWord from_letters(std::vector<Letter> letters, const FactorGroups& groups = {});
  static ReducedWord single(Letter l, const FactorGroups& groups = {});
  // Caller guarantees the letters are reduced.
  static ReducedWord unchecked(std::vector<Letter> letters);

  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& back() const { return letters_.back(); }

  ReducedWord inverse(const FactorGroups& groups = {}) const;
  // Appends a letter from the factor opposite to the last one. No validation.
  ReducedWord appended(Letter l) const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;

 private:
  std::vector<Letter> letters_;
};

ReducedWord reduce(const std::vector<Letter>& raw, const FactorGroups& groups = {});
ReducedWord concat(const ReducedWord& w, const ReducedWord& v, const FactorGroups& groups = {});
ReducedWord prefix(const ReducedWord& w, std::size_t k);
// 1-based. k = 0 on the identity word yields std::nullopt, the identity token.
std::optional<Letter> letter_at(const ReducedWord& w, std::size_t k);
std::size_t common_prefix_length(const ReducedWord& a, const ReducedWord& b);

// Structural check used by tests: alternation and no identity letters.
bool is_reduced(const std::vector<Letter>& letters, const FactorGroups& groups = {});

// Text form "g:1,h:-2,g:3"; "1" is the identity.
std::string to_string(const ReducedWord& w);
ReducedWord parse_word(std::string_view text, const FactorGroups& groups = {});

}  // namespace zlab

#endif
