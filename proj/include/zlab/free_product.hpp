#ifndef ZLAB_FREE_PRODUCT_HPP
#define ZLAB_FREE_PRODUCT_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zlab/model.hpp"
#include "zlab/words.hpp"

namespace zlab {

// Exact power 2^-exponent.
class DyadicScale {
 public:
  constexpr DyadicScale() = default;
  constexpr explicit DyadicScale(int exponent) : e_(exponent) {}

  constexpr int exponent() const { return e_; }
  double value() const;
  DyadicScale operator*(DyadicScale o) const { return DyadicScale(e_ + o.e_); }
  // value() >= x, decided on exponents so that underflow cannot interfere.
  bool at_least(double x) const;
  std::string to_string() const;

  friend constexpr bool operator==(DyadicScale a, DyadicScale b) { return a.e_ == b.e_; }
  friend constexpr std::strong_ordering operator<=>(DyadicScale a, DyadicScale b) { return b.e_ <=> a.e_; }

 private:
  int e_ = 0;
};

enum class Side : std::uint8_t { X = 0, Y = 1 };

inline Side other(Side s) { return s == Side::X ? Side::Y : Side::X; }
// G acts on the X copies, H on the Y copies.
inline Factor acting_factor(Side s) { return s == Side::X ? Factor::G : Factor::H; }
inline Side acted_side(Factor f) { return f == Factor::G ? Side::X : Side::Y; }
char side_tag(Side s);
// Copy holding the translate of word w != 1: a word ending in G names a Y copy.
Side node_side(const ReducedWord& w);

// A point of the closure of one translate: word, copy side, carrier coordinate.
struct WPoint {
  ReducedWord word;
  Side side = Side::X;
  double local = 0.5;

  friend bool operator==(const WPoint&, const WPoint&) = default;
  friend auto operator<=>(const WPoint&, const WPoint&) = default;
};

// An end of the tree, known through a finite prefix.
struct EndPoint {
  ReducedWord prefix;
  friend bool operator==(const EndPoint&, const EndPoint&) = default;
};

// A point of the completion: a translate point (interior or on a translate
// boundary) or an end.
using WBarPoint = std::variant<WPoint, EndPoint>;

// A computed point with a certified error radius in the metric d.
struct Located {
  WBarPoint point;
  double halfwidth = 0.0;
  bool exact() const { return halfwidth == 0.0; }
};

struct Certified {
  double value = 0.0;
  double halfwidth = 0.0;
};

// The finite core Z_eps: the prefix-closed word set M together with m(w), j(w).
class ZEpsilonIndex {
 public:
  ZEpsilonIndex(double eps, const std::vector<ReducedWord>& words, bool depth_cap_touched = false);

  double epsilon() const { return eps_; }
  bool depth_cap_touched() const { return cap_touched_; }
  const std::vector<ReducedWord>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

  bool contains(const ReducedWord& w) const;
  std::size_t m(const ReducedWord& w) const;
  std::size_t j(const ReducedWord& w) const { return w.length() - m(w); }

 private:
  struct TrieNode {
    std::vector<std::pair<Letter, int>> children;
    bool member = false;
  };
  int child(int node, const Letter& l) const;

  double eps_;
  bool cap_touched_;
  std::vector<ReducedWord> words_;
  std::vector<TrieNode> trie_;
};

struct EpsilonNet {
  double eps = 0.0;
  double certified_radius = 0.0;
  std::vector<WPoint> centers;
  bool depth_cap_touched = false;
};

class FreeProduct {
 public:
  FreeProduct(std::shared_ptr<const ZModel> x, std::shared_ptr<const ZModel> y);

  const ZModel& model(Side s) const { return s == Side::X ? *x_ : *y_; }
  FactorGroups groups() const { return {&x_->group(), &y_->group()}; }
  std::string name() const;

  int r(const Letter& l) const { return model(acted_side(l.factor)).r_value(l.element); }
  DyadicScale rstar(const ReducedWord& w) const;

  // Sup of d from the gluing point w x0 over the closure of the branch below w
  // (for w = 1: from x0 over the whole of the given side's base tree).
  double branch_radius(const ReducedWord& w) const;
  double base_radius(Side s) const { return tau_[static_cast<int>(s)]; }
  double branch_diameter(const ReducedWord& w) const { return 2.0 * branch_radius(w); }
  double diameter_bound() const { return tau_[0] + tau_[1]; }

  void validate(const WPoint& p) const;
  WPoint canonical(const WPoint& p) const;
  WPoint gluing_point(const ReducedWord& w) const;

  std::vector<WPoint> connecting_sequence(const WPoint& a, const WPoint& b) const;
  double dist(const WPoint& a, const WPoint& b) const;
  Certified dist(const WBarPoint& a, const WBarPoint& b) const;
  WPoint translate(const ReducedWord& w, const WPoint& p) const;
  WBarPoint extend_action_boundary(const ReducedWord& w, const WBarPoint& b) const;

  WPoint approximant(const EndPoint& e) const { return gluing_point(e.prefix); }
  // Certified bound on d(approximant, end), from the branch radius.
  double end_halfwidth(const EndPoint& e) const { return branch_radius(e.prefix); }
  // The a-priori bound 2^-(L-1) carried by a depth-L end.
  static double end_apriori_bound(const EndPoint& e);

  ZEpsilonIndex build_z_epsilon(double eps, int depth) const;
  DyadicScale t_of_w(const ReducedWord& w, const ZEpsilonIndex& idx) const;
  Located project_psi(const WBarPoint& p, const ZEpsilonIndex& idx) const;
  Located homotopy_K(const WBarPoint& p, double t, const ZEpsilonIndex& idx) const;
  Located homotopy_P(const WBarPoint& p, double t) const;

  EpsilonNet epsilon_net(double eps, int depth) const;

  // Random points and words for the verification sweeps.
  ReducedWord sample_word(std::mt19937_64& rng, std::size_t length) const;
  WBarPoint sample_point(std::mt19937_64& rng, int depth, double end_fraction, double boundary_fraction) const;

  // Every word w with r*(w) >= 2^-max_exponent and |w| <= depth, in DFS order.
  std::vector<ReducedWord> words_with_exponent_at_most(int max_exponent, int depth) const;

 private:
  // Exponent sum of r over the last k letters of w.
  int tail_exponent(const ReducedWord& w, std::size_t k) const;
  WPoint k_point(ReducedWord w, Side s, double u, double t, const ZEpsilonIndex& idx) const;

  struct Entry {
    double sum;
    Side side;
    double local;
    int exponent;
  };
  Entry ascend(const WPoint& p, std::size_t level) const;

  void cover_node(const ReducedWord& v, Side s, double R, int depth, EpsilonNet& net) const;

  std::shared_ptr<const ZModel> x_;
  std::shared_ptr<const ZModel> y_;
  double tau_[2];
  ZEpsilonIndex unit_index_;
};

std::string to_string(const WPoint& p);
std::string to_string(const EndPoint& e);
std::string to_string(const WBarPoint& p);
WPoint parse_wpoint(const std::string& text, const FactorGroups& groups = {});
// "end=g:1,h:1|depth=12"; a trailing ",..." repeats the listed letters up to the depth.
EndPoint parse_endpoint(const std::string& text, const FactorGroups& groups = {});
WBarPoint parse_wbar(const std::string& text, const FactorGroups& groups = {});

}  // namespace zlab

#endif
