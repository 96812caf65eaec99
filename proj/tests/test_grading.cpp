#include "chaincat/grading.hpp"

#include <gtest/gtest.h>

#include <boost/integer/common_factor.hpp>
#include <random>

using namespace chaincat;

namespace {
std::vector<ChainVector> grid(std::size_t lo_n, std::size_t max_n, int hi) {
  std::vector<ChainVector> all;
  for (std::size_t n = lo_n; n <= max_n; ++n)
    for (auto &a : chain_grid(n, 2, hi))
      all.push_back(a);
  return all;
}
BigInt tau_coefficient(const ChainVector &a) {
  return (a.size() % 2 == 0 ? 1 : -1) * 2 * (d(a) - mu(a));
}
} // namespace

TEST(SmithForm, DiagonalisesWithUnimodularTransforms) {
  IntMatrix A{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  auto s = smith_normal_form(A);
  EXPECT_EQ(s.U * A * s.V, s.D);
  EXPECT_EQ(s.diag(0), 2);
  EXPECT_EQ(s.diag(1), 6);
  EXPECT_EQ(s.diag(2), 12);
}

TEST(Grading, SingleEntryLIsFree) {
  auto L = build_L({2});
  EXPECT_EQ(L.group()->free_rank(), 1u);
  EXPECT_TRUE(L.group()->torsion().empty());
  EXPECT_TRUE(2 * L.xbar(1) == L.pbar());
}

TEST(Grading, EliminationInL) {
  auto L = build_L({2, 2});
  EXPECT_TRUE(4 * L.xbar(1) == L.pbar());
}

TEST(Grading, EmptyChainIsInfiniteCyclic) {
  auto Lt = build_Ltilde({});
  EXPECT_EQ(Lt.group()->free_rank(), 1u);
  EXPECT_TRUE(Lt.group()->torsion().empty());
  auto [i, t] = Lt.decompose(3 * Lt.T());
  EXPECT_EQ(i, 0);
  EXPECT_EQ(t, 3);
}

TEST(Grading, TauRelationExamples) {
  auto G = build_Ltilde({2, 2});
  EXPECT_TRUE(4 * G.tau() == 2 * G.T());
  auto G1 = build_Ltilde({2});
  EXPECT_TRUE(2 * G1.tau() == -2 * G1.T());
  auto G3 = build_Ltilde({3});
  // 3 tau = -3 xbar_1 = -pbar = -2T
  EXPECT_TRUE(3 * G3.tau() == -2 * G3.T());
  EXPECT_FALSE(3 * G3.tau() == -4 * G3.T());
}

TEST(Grading, DecomposeExamples) {
  auto G = build_Ltilde({2, 2});
  EXPECT_EQ(G.decompose(G.group()->zero()), std::make_pair(BigInt(0), BigInt(0)));
  EXPECT_EQ(G.decompose(G.pbar()), std::make_pair(BigInt(0), BigInt(2)));
  EXPECT_EQ(G.decompose(G.xbar(2)), std::make_pair(BigInt(2), BigInt(0)));
}

TEST(Grading, CrossGroupArithmeticFails) {
  auto G = build_Ltilde({2, 2});
  auto H = build_Ltilde({2, 2});
  EXPECT_THROW(G.T() + H.T(), std::logic_error);
  EXPECT_THROW((void)(G.T() == H.T()), std::logic_error);
  EXPECT_THROW(G.decompose(H.T()), std::logic_error);
}

TEST(Grading, StructureMatchesTwoGeneratorPresentation) {
  // L~ is generated by tau, T with one relation (d, -k); its torsion is
  // therefore Z/gcd(d, k) and its free rank 1.
  for (auto &a : grid(1, 5, 5)) {
    auto G = build_Ltilde(a);
    BigInt g = boost::integer::gcd(d(a), abs(tau_coefficient(a)));
    auto tor = G.group()->torsion();
    EXPECT_EQ(G.group()->free_rank(), 1u) << a.str();
    if (g == 1)
      EXPECT_TRUE(tor.empty()) << a.str();
    else
      EXPECT_EQ(tor, std::vector<BigInt>{g}) << a.str();
  }
}

TEST(Grading, TauRelationOnGrid) {
  for (auto &a : grid(1, 6, 6)) {
    auto G = build_Ltilde(a);
    EXPECT_TRUE(d(a) * G.tau() == tau_coefficient(a) * G.T()) << a.str();
    EXPECT_EQ(G.chart().period_u, d(a));
    auto L = build_L(a);
    EXPECT_EQ(L.chart().period_u, d(a)) << a.str();
  }
}

TEST(Grading, DecomposeRoundTripsRandomElements) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-30, 30);
  for (auto &a : grid(1, 4, 4)) {
    auto G = build_Ltilde(a);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<BigInt> raw(G.group()->generator_count());
      for (auto &x : raw)
        x = coef(rng);
      auto e = G.group()->element(raw);
      auto [i, t] = G.decompose(e);
      EXPECT_GE(i, 0);
      EXPECT_LT(i, d(a));
      EXPECT_TRUE(G.recompose(i, t) == e) << a.str();
      EXPECT_EQ(G.decompose(G.recompose(i, t)), std::make_pair(i, t));
    }
  }
}

TEST(Grading, GeneratorDegreeFormulaAgreesWithGroup) {
  for (auto &a : grid(1, 6, 5)) {
    auto G = build_Ltilde(a);
    for (std::size_t i = 1; i <= a.size(); ++i)
      EXPECT_TRUE(deg_xi(G, i) == G.xbar(i)) << a.str() << " i=" << i;
  }
  auto G = build_Ltilde({2, 2});
  EXPECT_TRUE(deg_xi(G, 1) == G.tau());
  auto H = build_Ltilde({2, 3, 2});
  EXPECT_TRUE(deg_xi(H, 0) == H.tau() + H.T());
  EXPECT_THROW(deg_xi(G, 0), std::invalid_argument);
  EXPECT_THROW(deg_xi(G, 3), std::out_of_range);
}

TEST(Grading, SerreElementExamples) {
  auto G = build_Ltilde({2});
  EXPECT_EQ(G.decompose(serre_element(G)), std::make_pair(BigInt(1), BigInt(1)));
  auto G2 = build_Ltilde({2, 2});
  EXPECT_EQ(G2.decompose(serre_element(G2)), std::make_pair(BigInt(1), BigInt(0)));
}

TEST(Grading, SerreElementBothFormsOnGrid) {
  for (auto &a : grid(1, 6, 5)) {
    auto G = build_Ltilde(a);
    auto l = serre_element(G);
    const BigInt n = a.size();
    auto [i, t] = G.decompose(l);
    EXPECT_EQ(i, mu_vee(a.init())) << a.str();
    EXPECT_EQ(t, n + 2 * serre_m(a.init())) << a.str();
    EXPECT_TRUE(l == -mu_vee(a) * G.tau() + (n + 2 * serre_m(a)) * G.T()) << a.str();
  }
}

TEST(Grading, NExamples) {
  EXPECT_EQ(N_of_n({2, 2}), 0);
  EXPECT_EQ(N_of_n({3, 2}), 0);
  EXPECT_EQ(N_of_n({2, 2, 2}), 0);
  EXPECT_THROW(N_of_n({2}), std::invalid_argument);
}

TEST(Grading, NSolvesItsRelation) {
  for (auto &a : grid(2, 6, 4)) {
    const std::size_t n = a.size();
    BigInt N = N_of_n(a);
    auto L = build_L(a);
    auto lhs = L.group()->zero();
    for (std::size_t i = (n % 2 == 0 ? 2 : 1); i + 2 <= n; i += 2)
      lhs = lhs - L.xbar(i);
    EXPECT_TRUE(lhs == alpha(a, static_cast<int>(n) - 3) * L.tau() + N * L.pbar()) << a.str();
  }
}
