#include "zlab/words.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace zlab {

char factor_tag(Factor f) { return f == Factor::G ? 'g' : 'h'; }

Factor factor_from_tag(char c) {
  switch (c) {
    case 'g':
    case 'G':
      return Factor::G;
    case 'h':
    case 'H':
      return Factor::H;
    default:
      throw std::invalid_argument(std::string("unknown factor tag '") + c + "'");
  }
}

std::int64_t IntegerGroup::multiply(std::int64_t a, std::int64_t b) const {
  if (!contains(a) || !contains(b)) throw std::invalid_argument("element outside the integer model's domain");
  const std::int64_t s = a + b;
  if (!contains(s)) throw std::invalid_argument("product leaves the integer model's domain");
  return s;
}

const GroupModel& integers() {
  static const IntegerGroup z;
  return z;
}

namespace {

void check_letter(const Letter& l, const FactorGroups& groups) {
  if (l.factor != Factor::G && l.factor != Factor::H) throw std::invalid_argument("unknown factor tag");
  if (!groups.of(l.factor).contains(l.element))
    throw std::invalid_argument("element " + std::to_string(l.element) + " outside the factor model's domain");
}

}  // namespace

bool is_reduced(const std::vector<Letter>& letters, const FactorGroups& groups) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const Letter& l = letters[i];
    if (l.factor != Factor::G && l.factor != Factor::H) return false;
    const GroupModel& m = groups.of(l.factor);
    if (!m.contains(l.element) || m.is_identity(l.element)) return false;
    if (i > 0 && letters[i - 1].factor == l.factor) return false;
  }
  return true;
}

ReducedWord ReducedWord::from_letters(std::vector<Letter> letters, const FactorGroups& groups) {
  if (!is_reduced(letters, groups)) throw std::invalid_argument("letters do not form a reduced word");
  ReducedWord w;
  w.letters_ = std::move(letters);
  return w;
}

ReducedWord ReducedWord::unchecked(std::vector<Letter> letters) {
  ReducedWord w;
  w.letters_ = std::move(letters);
  return w;
}

ReducedWord ReducedWord::single(Letter l, const FactorGroups& groups) { return from_letters({l}, groups); }

ReducedWord ReducedWord::inverse(const FactorGroups& groups) const {
  ReducedWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    w.letters_.push_back({it->factor, groups.of(it->factor).inverse(it->element)});
  return w;
}

ReducedWord ReducedWord::appended(Letter l) const {
  ReducedWord w = *this;
  w.letters_.push_back(l);
  return w;
}

ReducedWord reduce(const std::vector<Letter>& raw, const FactorGroups& groups) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (const Letter& l : raw) {
    check_letter(l, groups);
    const GroupModel& m = groups.of(l.factor);
    if (m.is_identity(l.element)) continue;
    if (!stack.empty() && stack.back().factor == l.factor) {
      const std::int64_t p = m.multiply(stack.back().element, l.element);
      if (m.is_identity(p))
        stack.pop_back();
      else
        stack.back().element = p;
    } else {
      stack.push_back(l);
    }
  }
  return ReducedWord::from_letters(std::move(stack), groups);
}

ReducedWord concat(const ReducedWord& w, const ReducedWord& v, const FactorGroups& groups) {
  std::vector<Letter> raw = w.letters();
  raw.insert(raw.end(), v.letters().begin(), v.letters().end());
  return reduce(raw, groups);
}

ReducedWord prefix(const ReducedWord& w, std::size_t k) {
  if (k > w.length()) throw std::out_of_range("prefix length exceeds word length");
  return ReducedWord::unchecked({w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(k)});
}

std::optional<Letter> letter_at(const ReducedWord& w, std::size_t k) {
  if (k == 0 && w.is_identity()) return std::nullopt;
  if (k == 0 || k > w.length()) throw std::out_of_range("letter index out of range");
  return w[k - 1];
}

std::size_t common_prefix_length(const ReducedWord& a, const ReducedWord& b) {
  const std::size_t n = std::min(a.length(), b.length());
  std::size_t c = 0;
  while (c < n && a[c] == b[c]) ++c;
  return c;
}

std::string to_string(const ReducedWord& w) {
  if (w.is_identity()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i) s += ',';
    s += factor_tag(w[i].factor);
    s += ':';
    s += std::to_string(w[i].element);
  }
  return s;
}

ReducedWord parse_word(std::string_view text, const FactorGroups& groups) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "1") return {};
  if (text.empty()) throw std::invalid_argument("empty word text");
  std::vector<Letter> letters;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string_view tok = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (tok.size() < 3 || tok[1] != ':') throw std::invalid_argument("malformed letter '" + std::string(tok) + "'");
    Letter l;
    l.factor = factor_from_tag(tok[0]);
    std::string_view num = tok.substr(2);
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), l.element);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw std::invalid_argument("malformed element '" + std::string(tok) + "'");
    check_letter(l, groups);
    letters.push_back(l);
  }
  if (!is_reduced(letters, groups)) throw std::invalid_argument("word text is not alternating or contains an identity letter");
  return ReducedWord::from_letters(std::move(letters), groups);
}

}  // namespace zlab
