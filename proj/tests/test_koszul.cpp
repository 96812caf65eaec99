#include "chaincat/ext_algebra.hpp"
#include "chaincat/koszul.hpp"

#include <gtest/gtest.h>

using namespace chaincat;

namespace {

ChainVector A(std::initializer_list<int> v) { return ChainVector(v); }

// dim Hom^t(M, N(l)) read off a full-period table
BigInt hom_at(const ChainGrading &G, const ExtTable &tab, const GroupElement &l, long long t) {
  auto key = G.decompose(l + BigInt(t) * G.T());
  auto it = tab.dims.find(key);
  return it == tab.dims.end() ? BigInt(0) : it->second;
}

GroupElement minus_sum(const ChainGrading &G, std::vector<std::size_t> idx) {
  GroupElement g = G.group()->zero();
  for (auto i : idx)
    g = g - G.xbar(i);
  return g;
}

std::vector<ChainVector> small_grid(std::size_t nmax2, int amax2, int amax3) {
  std::vector<ChainVector> out;
  for (std::size_t n = 1; n <= 3; ++n) {
    int hi = n <= nmax2 ? amax2 : amax3;
    for (const auto &a : chain_grid(n, 2, hi))
      out.push_back(a);
  }
  return out;
}

} // namespace

TEST(Stab, SingleVariableSquare) {
  auto M = stab_vars(chain_potential(A({2})), {1});
  ASSERT_EQ(M.gens.size(), 1u);
  EXPECT_EQ(M.cof[0], Poly::monomial({1}));
  EXPECT_EQ(M.rank(), 2u);
}

TEST(Stab, CofactorByDivision) {
  auto M = stab_vars(chain_potential(A({2, 2})), {2});
  Poly expect = Poly::monomial({2, 0}) + Poly::monomial({0, 1});
  EXPECT_EQ(M.cof[0], expect);
}

TEST(Stab, ObjectFForTwoTwo) {
  auto F = object_F(A({2, 2}));
  EXPECT_EQ(F.rank(), 4u);
  EXPECT_TRUE(squares_to_potential(F));
  EXPECT_TRUE(parity_split_even(F));
}

TEST(Stab, RejectsIdealMissingThePotential) {
  EXPECT_THROW(stab_vars(chain_potential(A({2, 2})), {1}), std::invalid_argument);
}

TEST(Stab, SquaresToPotentialOnGrid) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto &a : chain_grid(n, 2, 3)) {
      for (const auto &M : {object_E(a), object_F(a)}) {
        EXPECT_TRUE(squares_to_potential(M)) << a.str();
        EXPECT_TRUE(parity_split_even(M)) << a.str();
      }
      for (int i = 0; i < 3; ++i)
        EXPECT_TRUE(squares_to_potential(window_object(a, i))) << a.str();
    }
}

TEST(ExtOracle, SingleSquare) {
  const auto a = A({2});
  auto E = object_E(a);
  auto tab = ext_table_mf(a, E, E, full_period(a));
  EXPECT_TRUE(tab.conclusive) << tab.note;
  std::map<std::pair<BigInt, BigInt>, BigInt> expect{{{0, 0}, 1}, {{1, 1}, 1}};
  EXPECT_EQ(tab.dims, expect);
}

// The algebra B_a built from the closed-form generator degrees is an
// independent description of Ext*(E, E(l)).
TEST(ExtOracle, ReproducesTheAlgebraOnGrid) {
  for (const auto &a : small_grid(2, 4, 3)) {
    auto E = object_E(a);
    auto tab = ext_table_mf(a, E, E, full_period(a));
    EXPECT_TRUE(tab.conclusive) << a.str() << ": " << tab.note;
    auto B = build_B(a);
    std::map<std::pair<BigInt, BigInt>, BigInt> expect;
    for (std::size_t b = 0; b < B.dim(); ++b)
      expect[B.tau_T(b)] += 1;
    EXPECT_EQ(tab.dims, expect) << a.str();
  }
}

TEST(ExtOracle, NarrowWindowIsFlagged) {
  const auto a = A({2, 3});
  auto E = object_E(a);
  ExtWindow w = full_period(a);
  w.t = std::pair<BigInt, BigInt>{0, 0};
  auto tab = ext_table_mf(a, E, E, w);
  EXPECT_FALSE(tab.conclusive);
  EXPECT_FALSE(tab.note.empty());
}

TEST(EFHom, TwoTwoTwistPatterns) {
  const auto a = A({2, 2});
  auto E = object_E(a), F = object_F(a);
  auto ef = ext_table_mf(a, E, F, full_period(a));
  auto fe = ext_table_mf(a, F, E, full_period(a));
  ASSERT_TRUE(ef.conclusive && fe.conclusive);
  for (long long k = 0; k < 4; ++k) {
    EXPECT_EQ(ef.total(k) != 0, k == 0 || k == 2) << k;
    // -alpha_0 = -1, a_1 - alpha_0 = 1
    EXPECT_EQ(fe.total(k) != 0, k == 1 || k == 3) << k;
  }
}

TEST(EFHom, TwistsAndDegreesForSmallChains) {
  for (std::size_t n = 2; n <= 3; ++n)
    for (const auto &a : chain_grid(n, 2, n == 2 ? 4 : 3)) {
      const ChainGrading G = build_Ltilde(a);
      const BigInt D = d(a);
      auto E = object_E(a), F = object_F(a);
      auto ef = ext_table_mf(a, E, F, full_period(a));
      auto fe = ext_table_mf(a, F, E, full_period(a));
      ASSERT_TRUE(ef.conclusive && fe.conclusive) << a.str();

      auto residue = [&](BigInt x) { return ((x % D) + D) % D; };
      const int ni = static_cast<int>(n);
      std::map<BigInt, BigInt> ef_expect, fe_expect;
      ef_expect[residue(alpha(a, ni - 3))] += 1;
      ef_expect[residue(alpha(a, ni - 1))] += 1;
      fe_expect[residue(-alpha(a, ni - 2))] += 1;
      fe_expect[residue(d(a.slice(1, n - 1)) - alpha(a, ni - 2))] += 1;
      for (BigInt k = 0; k < D; ++k) {
        EXPECT_EQ(ef.total(k), ef_expect.count(k) ? ef_expect[k] : BigInt(0)) << a.str() << " E->F " << k;
        EXPECT_EQ(fe.total(k), fe_expect.count(k) ? fe_expect[k] : BigInt(0)) << a.str() << " F->E " << k;
      }

      if (n == 2) {
        EXPECT_EQ(hom_at(G, ef, minus_sum(G, {}), 0), 1) << a.str();
        EXPECT_EQ(hom_at(G, ef, minus_sum(G, {2}), 1), 1) << a.str();
        EXPECT_EQ(hom_at(G, fe, minus_sum(G, {1}), 1), 1) << a.str();
        EXPECT_EQ(hom_at(G, fe, minus_sum(G, {1, 2}), 2), 1) << a.str();
      } else {
        EXPECT_EQ(hom_at(G, ef, minus_sum(G, {1}), 1), 1) << a.str();
        EXPECT_EQ(hom_at(G, ef, minus_sum(G, {1, 3}), 2), 1) << a.str();
        EXPECT_EQ(hom_at(G, fe, minus_sum(G, {2}), 1), 1) << a.str();
        EXPECT_EQ(hom_at(G, fe, minus_sum(G, {2, 3}), 2), 1) << a.str();
      }
    }
}

TEST(EFHom, SingleHomDegree) {
  for (std::size_t n = 2; n <= 3; ++n)
    for (const auto &a : chain_grid(n, 2, 3)) {
      const ChainGrading G = build_Ltilde(a);
      auto E = object_E(a), F = object_F(a);
      auto ef = ext_table_mf(a, E, F, full_period(a));
      const long long t = static_cast<long long>((n - 1) / 2) + 2 * static_cast<long long>(N_of_n(a));
      EXPECT_EQ(hom_at(G, ef, alpha(a, static_cast<int>(n) - 3) * G.tau(), t), 1) << a.str();
    }
}

TEST(Vgit, WeightExamples) {
  EXPECT_EQ(vgit_weights(A({2, 2})), (std::vector<BigInt>{1, -2, 2}));
  EXPECT_EQ(vgit_weights(A({2})), (std::vector<BigInt>{-1, 1}));
  EXPECT_EQ(vgit_weights(A({3, 2})), (std::vector<BigInt>{1, -3, 3}));
}

// Each weight makes the extended potential homogeneous of weight 0.
TEST(Vgit, PotentialIsInvariant) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (const auto &a : chain_grid(n, 2, 4)) {
      auto c = vgit_weights(a);
      const Poly W = vgit_potential(a);
      for (auto &[e, k] : W.terms()) {
        BigInt s = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
          s += e[i] * c[i];
        EXPECT_EQ(s, 0) << a.str();
      }
    }
}

TEST(Vgit, UntwistedWeightsLieInTheSmallInterval) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto &a : chain_grid(n, 2, 4)) {
      auto w = restriction_weights(a, window_object(a, 0));
      EXPECT_EQ(*std::min_element(w.begin(), w.end()), 0) << a.str();
      EXPECT_EQ(*std::max_element(w.begin(), w.end()), alpha(a, static_cast<int>(n) - 2)) << a.str();
    }
}

TEST(Vgit, WindowMembershipBoundary) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto &a : chain_grid(n, 2, 4)) {
      const BigInt top = mu_vee(a.init());
      for (BigInt i = 0; i < top; ++i)
        EXPECT_TRUE(window_check(a, window_object(a, i), Window::Minus)) << a.str() << " i=" << i;
      EXPECT_FALSE(window_check(a, window_object(a, top), Window::Minus)) << a.str();
    }
}

TEST(Vgit, IntervalLengths) {
  const auto a = A({2, 3, 2});
  auto m = window_interval(a, Window::Minus);
  auto p = window_interval(a, Window::Plus);
  EXPECT_EQ(m.second, alpha(a, 2) - 1);
  EXPECT_EQ(p.second, 6 + alpha(a, 1) - 1);
}
