#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "zlab/free_product.hpp"
#include "zlab/rng.hpp"

using namespace zlab;

namespace {

FreeProduct line_fp() { return FreeProduct(make_model("int-line"), make_model("int-line")); }

// Shortest path on the finite graph of gluing points spanned by two points:
// each translate contributes a clique with edge lengths 2^-r*(w) rho_bar.
double dijkstra_dist(const FreeProduct& fp, const WPoint& a, const WPoint& b) {
  std::vector<std::map<std::pair<ReducedWord, Side>, double>> members;
  std::map<ReducedWord, int> glue;
  auto node = [&](std::map<std::pair<ReducedWord, Side>, double> m) {
    members.push_back(std::move(m));
    return static_cast<int>(members.size()) - 1;
  };
  node({{{a.word, a.side}, a.local}});
  node({{{b.word, b.side}, b.local}});
  node({{{ReducedWord{}, Side::X}, fp.model(Side::X).basepoint()}, {{ReducedWord{}, Side::Y}, fp.model(Side::Y).basepoint()}});
  for (const ReducedWord* w : {&a.word, &b.word})
    for (std::size_t k = 1; k <= w->length(); ++k) {
      const ReducedWord p = prefix(*w, k);
      if (glue.count(p)) continue;
      const Letter l = p.back();
      const Side inner = node_side(p);
      const Side outer = acted_side(l.factor);
      glue[p] = node({{{p, inner}, fp.model(inner).basepoint()},
                      {{prefix(p, k - 1), outer}, fp.model(outer).orbit_point(l.element)}});
    }
  const std::size_t n = members.size();
  std::vector<double> best(n, INFINITY);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  best[0] = 0.0;
  pq.push({0.0, 0});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > best[u]) continue;
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& [key, lu] : members[u]) {
        auto it = members[v].find(key);
        if (it == members[v].end()) continue;
        const double scale = std::ldexp(1.0, -fp.rstar(key.first).exponent());
        const double nd = d + scale * fp.model(key.second).rho_bar(lu, it->second);
        if (nd < best[v]) {
          best[v] = nd;
          pq.push({nd, v});
        }
      }
    }
  }
  return best[1];
}

WPoint random_point(const FreeProduct& fp, std::mt19937_64& rng, std::size_t maxlen) {
  const ReducedWord w = fp.sample_word(rng, rng() % (maxlen + 1));
  const Side s = w.is_identity() ? ((rng() & 1) ? Side::X : Side::Y) : node_side(w);
  return {w, s, unit_double(rng)};
}

}  // namespace

TEST(DyadicScale, ExactValuesAndComparisons) {
  EXPECT_EQ(DyadicScale(6).value(), 1.0 / 64);
  EXPECT_EQ(DyadicScale(2) * DyadicScale(3), DyadicScale(5));
  EXPECT_TRUE(DyadicScale(2).at_least(0.25));
  EXPECT_FALSE(DyadicScale(3).at_least(0.25));
  EXPECT_TRUE(DyadicScale(2000).at_least(0.0));
  EXPECT_FALSE(DyadicScale(2000).at_least(1e-300));
  EXPECT_EQ(DyadicScale(5).to_string(), "2^-5");
}

TEST(FreeProduct, TauSolvesTheBranchRecursion) {
  const FreeProduct fp = line_fp();
  EXPECT_DOUBLE_EQ(fp.base_radius(Side::X), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(fp.base_radius(Side::Y), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(fp.diameter_bound(), 4.0 / 3.0);
}

TEST(FreeProduct, DistMatchesGraphShortestPath) {
  const FreeProduct fp = line_fp();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3000; ++i) {
    WPoint a = random_point(fp, rng, 5);
    WPoint b = (i % 3 == 0) ? WPoint{concat(a.word, fp.sample_word(rng, 0)), a.side, unit_double(rng)}
                            : random_point(fp, rng, 5);
    if (i % 5 == 0 && !a.word.is_identity()) {
      // Share a prefix so the common-ancestor path is exercised.
      const ReducedWord pre = prefix(a.word, rng() % (a.word.length() + 1));
      const ReducedWord w = concat(pre, fp.sample_word(rng, 1 + rng() % 3));
      if (!w.is_identity()) b = {w, node_side(w), unit_double(rng)};
    }
    const double d = fp.dist(a, b);
    const double oracle = dijkstra_dist(fp, a, b);
    ASSERT_NEAR(d, oracle, 1e-12 * (1.0 + oracle)) << to_string(a) << " ; " << to_string(b);
  }
}

TEST(FreeProduct, WorkedDistances) {
  const FreeProduct fp = line_fp();
  // x0 to y0-side point at local 0.2: 0 + |0.2 - 0.5|.
  EXPECT_DOUBLE_EQ(fp.dist(parse_wpoint("word=1|side=X|local=0.5"), parse_wpoint("word=1|side=Y|local=0.2")), 0.3);
  // Inside the translate of g:1 (scale 2^-2), from its gluing point.
  EXPECT_DOUBLE_EQ(fp.dist(parse_wpoint("word=1|side=X|local=0.5"), parse_wpoint("word=g:1|side=Y|local=0.2")),
                   std::fabs(IntLineModel::embed(1) - 0.5) + 0.25 * 0.3);
}

TEST(FreeProduct, CanonicalFormsAgree) {
  const FreeProduct fp = line_fp();
  const WPoint glued = fp.canonical({ReducedWord{}, Side::X, IntLineModel::embed(3)});
  EXPECT_EQ(glued, fp.gluing_point(parse_word("g:3")));
  EXPECT_EQ(fp.canonical(glued), glued);
  EXPECT_EQ(fp.canonical({ReducedWord{}, Side::Y, 0.5}), fp.gluing_point({}));
  EXPECT_THROW(fp.validate({parse_word("g:1"), Side::X, 0.3}), std::invalid_argument);
}

TEST(FreeProduct, TranslationIsInvertibleAndDistanceSymmetric) {
  const FreeProduct fp = line_fp();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const WPoint a = random_point(fp, rng, 4);
    const WPoint b = random_point(fp, rng, 4);
    // Moderate letters: near a carrier end the action is ill-conditioned in
    // double precision, roughly like the square of the element.
    std::vector<Letter> letters;
    for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k) {
      const Factor f = k == 0 ? ((rng() & 1) ? Factor::G : Factor::H) : other(letters.back().factor);
      letters.push_back({f, static_cast<std::int64_t>(rng() % 1000) + 1});
      if (rng() & 1) letters.back().element = -letters.back().element;
    }
    const ReducedWord w = ReducedWord::from_letters(letters);
    const WPoint ta = fp.translate(w, a), tb = fp.translate(w, b);
    EXPECT_DOUBLE_EQ(fp.dist(ta, tb), fp.dist(tb, ta));
    EXPECT_LE(fp.dist(fp.translate(w.inverse(), ta), a), 1e-9)
        << to_string(a) << " by " << to_string(w) << " -> " << to_string(ta) << " -> " << to_string(fp.translate(w.inverse(), ta));
  }
}

TEST(FreeProduct, BranchRadiusBoundsTheBranch) {
  const FreeProduct fp = line_fp();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const ReducedWord w = fp.sample_word(rng, 1 + rng() % 4);
    const WPoint root = fp.gluing_point(w);
    const double R = fp.branch_radius(w);
    for (int k = 0; k < 50; ++k) {
      ReducedWord ext = w;
      for (std::size_t j = 0, n = rng() % 5; j < n; ++j)
        ext = ext.appended({other(ext.back().factor), fp.model(acted_side(other(ext.back().factor))).sample_element(rng)});
      const WPoint p{ext, node_side(ext), unit_double(rng)};
      ASSERT_LE(fp.dist(root, p), R) << to_string(w) << " -> " << to_string(p);
    }
  }
}

TEST(FreeProduct, EndHalfwidthIsTighterThanAprioriBound) {
  const FreeProduct fp = line_fp();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const ReducedWord w = fp.sample_word(rng, 12);
    for (std::size_t L = 1; L < 12; ++L) {
      const EndPoint e{prefix(w, L)};
      const double gap = fp.dist(fp.approximant(e), fp.gluing_point(w));
      ASSERT_LE(gap, fp.end_halfwidth(e));
      ASSERT_LE(fp.end_halfwidth(e), FreeProduct::end_apriori_bound(e));
    }
  }
}

TEST(FreeProduct, ZEpsilonIndexMatchesBruteForce) {
  const FreeProduct fp = line_fp();
  for (double eps : {1.0, 0.5, 0.25, 0.1}) {
    const ZEpsilonIndex idx = fp.build_z_epsilon(eps, 8);
    std::set<ReducedWord> brute{ReducedWord{}};
    // Letters |a| <= 16 and length <= 4 cover every member at these scales.
    std::vector<ReducedWord> frontier{ReducedWord{}};
    for (int len = 1; len <= 4; ++len) {
      std::vector<ReducedWord> next;
      for (const auto& w : frontier)
        for (Factor f : {Factor::G, Factor::H}) {
          if (!w.is_identity() && w.back().factor == f) continue;
          for (std::int64_t a = -16; a <= 16; ++a) {
            if (a == 0) continue;
            const ReducedWord v = w.appended({f, a});
            if (2.0 * fp.base_radius(node_side(v)) * fp.rstar(v).value() < eps) continue;
            // r* only shrinks along extensions, so pruning here loses nothing.
            brute.insert(v);
            next.push_back(v);
          }
        }
      frontier = std::move(next);
    }
    EXPECT_EQ(std::set<ReducedWord>(idx.words().begin(), idx.words().end()), brute) << eps;
    EXPECT_FALSE(idx.depth_cap_touched());
  }
  EXPECT_EQ(fp.build_z_epsilon(0.25, 8).size(), 5u);
}

TEST(FreeProduct, ZEpsilonIndexValidates) {
  EXPECT_THROW(ZEpsilonIndex(0.5, {parse_word("g:1")}), std::invalid_argument);
  EXPECT_THROW(ZEpsilonIndex(0.5, {ReducedWord{}, parse_word("g:1,h:1")}), std::invalid_argument);
  const ZEpsilonIndex idx(0.5, {ReducedWord{}, parse_word("g:1")});
  EXPECT_EQ(idx.m(parse_word("g:1,h:2,g:3")), 1u);
  EXPECT_EQ(idx.j(parse_word("g:1,h:2,g:3")), 2u);
  EXPECT_EQ(idx.m(parse_word("h:1")), 0u);
}

TEST(FreeProduct, TOfWNeedsDepthTwo) {
  const FreeProduct fp = line_fp();
  const ZEpsilonIndex idx(0.5, {ReducedWord{}});
  EXPECT_THROW(fp.t_of_w(parse_word("g:1"), idx), std::domain_error);
  EXPECT_EQ(fp.t_of_w(parse_word("g:1,h:3"), idx), DyadicScale(3));
}

TEST(FreeProduct, HomotopyEndpoints) {
  const FreeProduct fp = line_fp();
  const ZEpsilonIndex idx = fp.build_z_epsilon(0.5, 8);
  std::mt19937_64 rng(21);
  const WBarPoint x0 = fp.gluing_point({});
  for (int i = 0; i < 2000; ++i) {
    const WBarPoint p = fp.sample_point(rng, 6, 0.2, 0.1);
    if (std::holds_alternative<WPoint>(p)) {
      EXPECT_EQ(fp.dist(fp.homotopy_K(p, 0.0, idx).point, p).value, 0.0);
      EXPECT_EQ(fp.dist(fp.homotopy_P(p, 0.0).point, p).value, 0.0);
    }
    const Certified k1 = fp.dist(fp.homotopy_K(p, 1.0, idx).point, fp.project_psi(p, idx).point);
    EXPECT_LE(k1.value, k1.halfwidth);
    EXPECT_EQ(fp.dist(fp.homotopy_P(p, 1.0).point, x0).value, 0.0);
  }
}

TEST(FreeProduct, EpsilonNetSizes) {
  const FreeProduct fp = line_fp();
  EXPECT_EQ(fp.epsilon_net(5.0, 6).centers.size(), 1u);
  const auto coarse = fp.epsilon_net(0.5, 6).centers.size();
  const auto fine = fp.epsilon_net(0.125, 6).centers.size();
  EXPECT_GT(fine, coarse);
  EXPECT_THROW(fp.epsilon_net(0.0, 6), std::invalid_argument);
}

TEST(FreeProduct, TextForms) {
  const FreeProduct fp = line_fp();
  const WPoint p = parse_wpoint("word=g:1|side=Y|local=0.2");
  EXPECT_EQ(parse_wpoint(to_string(p)), p);
  const EndPoint e = parse_endpoint("end=g:1,h:1,...|depth=6");
  EXPECT_EQ(e.prefix, parse_word("g:1,h:1,g:1,h:1,g:1,h:1"));
  EXPECT_TRUE(std::holds_alternative<EndPoint>(parse_wbar(to_string(WBarPoint{e}))));
  EXPECT_THROW(parse_wpoint("word=g:1|side=Z|local=0.2"), std::invalid_argument);
}
