#pragma once

#include "chaincat/grading.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>

namespace chaincat {

// Truncated monomial algebra
//   n even: k[x1, x3, ..., x_{n-1}] / (x_i^{a_i})
//   n odd : k[x0, x2, ..., x_{n-1}] / (x0^2 - eps x2, x_i^{a_i}),  eps = [a1 == 2]
// with x2 read as 0 when n = 1.
class ExtAlgebra {
public:
  using Exponents = std::vector<int>;
  struct Product {
    Rational coeff;
    std::size_t index;
  };
  enum class Strategy { SquareFirst, TruncateFirst };

  explicit ExtAlgebra(const ChainVector &a) : a_(a), grading_(build_Ltilde(a)) {
    const std::size_t n = a.size();
    if (n == 0)
      throw std::invalid_argument("B_a needs n >= 1");
    odd_ = n % 2 == 1;
    if (odd_) {
      gens_.push_back(0);
      for (std::size_t i = 2; i + 1 <= n; i += 2)
        gens_.push_back(i);
      eps_ = (a[1] == 2) ? 1 : 0;
    } else {
      for (std::size_t i = 1; i + 1 <= n; i += 2)
        gens_.push_back(i);
    }
    for (std::size_t g : gens_)
      gen_deg_.push_back(deg_xi(grading_, g));
    enumerate_basis();
    for (auto &e : basis_) {
      GroupElement deg = grading_.group()->zero();
      for (std::size_t k = 0; k < gens_.size(); ++k)
        if (e[k])
          deg = deg + BigInt(e[k]) * gen_deg_[k];
      degrees_.push_back(deg);
      decomp_.push_back(grading_.decompose(deg));
    }
  }

  const ChainVector &chain() const { return a_; }
  const ChainGrading &grading() const { return grading_; }
  bool odd() const { return odd_; }
  int epsilon() const { return eps_; }
  const std::vector<std::size_t> &generator_indices() const { return gens_; }
  const std::vector<Exponents> &basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  const GroupElement &degree(std::size_t b) const { return degrees_.at(b); }
  // (tau-degree in [0, d), T-degree)
  const std::pair<BigInt, BigInt> &tau_T(std::size_t b) const { return decomp_.at(b); }

  std::optional<Exponents> reduce(Exponents e, Strategy s = Strategy::SquareFirst) const {
    while (true) {
      if (s == Strategy::TruncateFirst && truncated(e))
        return std::nullopt;
      if (odd_ && e[0] >= 2) {
        if (eps_ == 0 || gens_.size() < 2)
          return std::nullopt;
        e[0] -= 2;
        e[1] += 1;
        continue;
      }
      if (truncated(e))
        return std::nullopt;
      return e;
    }
  }

  std::optional<std::size_t> index_of(const Exponents &e) const {
    auto it = index_.find(e);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  std::optional<Product> multiply(std::size_t i, std::size_t j) const {
    Exponents e = basis_.at(i);
    for (std::size_t k = 0; k < e.size(); ++k)
      e[k] += basis_.at(j)[k];
    auto r = reduce(e);
    if (!r)
      return std::nullopt;
    return Product{Rational(1), index_.at(*r)};
  }

  std::size_t unit() const { return index_.at(Exponents(gens_.size(), 0)); }

  // basis elements killed by every generator
  std::vector<std::size_t> socle() const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < dim(); ++b) {
      bool killed = true;
      for (std::size_t k = 0; k < gens_.size() && killed; ++k) {
        Exponents e = basis_[b];
        e[k] += 1;
        if (reduce(e))
          killed = false;
      }
      if (killed)
        out.push_back(b);
    }
    return out;
  }

  // Both reduction orders agree on every monomial in a box that covers all
  // overlaps of the rewrite rules.
  bool confluent() const {
    Exponents hi;
    for (std::size_t k = 0; k < gens_.size(); ++k)
      hi.push_back(odd_ && k == 0 ? 4 : a_[gens_[k]] + 1);
    Exponents e(gens_.size(), 0);
    while (true) {
      if (reduce(e, Strategy::SquareFirst) != reduce(e, Strategy::TruncateFirst))
        return false;
      std::size_t k = 0;
      while (k < e.size() && e[k] == hi[k]) {
        e[k] = 0;
        ++k;
      }
      if (k == e.size())
        return true;
      ++e[k];
    }
  }

private:
  bool truncated(const Exponents &e) const {
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      if (odd_ && k == 0)
        continue;
      if (e[k] >= a_[gens_[k]])
        return true;
    }
    return false;
  }
  // closure of {1} under multiplication by generators
  void enumerate_basis() {
    std::deque<Exponents> queue{Exponents(gens_.size(), 0)};
    std::set<Exponents> seen{queue.front()};
    while (!queue.empty()) {
      Exponents e = queue.front();
      queue.pop_front();
      for (std::size_t k = 0; k < gens_.size(); ++k) {
        Exponents f = e;
        f[k] += 1;
        auto r = reduce(f);
        if (r && seen.insert(*r).second)
          queue.push_back(*r);
      }
    }
    basis_.assign(seen.begin(), seen.end());
    for (std::size_t b = 0; b < basis_.size(); ++b)
      index_[basis_[b]] = b;
  }

  ChainVector a_;
  ChainGrading grading_;
  bool odd_ = false;
  int eps_ = 0;
  std::vector<std::size_t> gens_;
  std::vector<GroupElement> gen_deg_;
  std::vector<Exponents> basis_;
  std::map<Exponents, std::size_t> index_;
  std::vector<GroupElement> degrees_;
  std::vector<std::pair<BigInt, BigInt>> decomp_;
};

inline ExtAlgebra build_B(const ChainVector &a) { return ExtAlgebra(a); }

inline BigInt closed_form_dim_B(const ChainVector &a) {
  const std::size_t n = a.size();
  BigInt r = (n % 2 == 1) ? 2 : 1;
  for (std::size_t i = (n % 2 == 1) ? 2 : 1; i + 1 <= n; i += 2)
    r *= a[i];
  return r;
}

// Hom^t(E(i), E(j)) depends on k = j - i only; entry k lists (t, dim).
struct HomTable {
  std::size_t size = 1; // mu_vee(a)
  std::vector<std::map<BigInt, BigInt>> by_offset;
  const std::map<BigInt, BigInt> &at(std::size_t i, std::size_t j) const {
    if (i > j || j >= size)
      throw std::out_of_range("HomTable wants 0 <= i <= j < mu_vee(a)");
    return by_offset.at(j - i);
  }
};

inline HomTable hom_table(const ExtAlgebra &B) {
  HomTable h;
  const BigInt mv = mu_vee(B.chain());
  h.size = static_cast<std::size_t>(mv);
  h.by_offset.resize(h.size);
  for (std::size_t b = 0; b < B.dim(); ++b) {
    const auto &[i, t] = B.tau_T(b);
    if (i < mv)
      h.by_offset[static_cast<std::size_t>(i)][t] += 1;
  }
  return h;
}

inline IntMatrix gram_from_table(const HomTable &h) {
  IntMatrix G(h.size, h.size);
  for (std::size_t i = 0; i < h.size; ++i)
    for (std::size_t j = i; j < h.size; ++j)
      for (auto &[t, dim] : h.at(i, j))
        G(i, j) += (t % 2 == 0) ? dim : BigInt(-dim);
  return G;
}

inline IntMatrix gram_AT(const ChainVector &a) {
  if (a.empty())
    return IntMatrix::identity(1);
  return gram_from_table(hom_table(build_B(a)));
}

struct PairingReport {
  bool ok = true;
  std::size_t socle_dim = 0;
  BigInt socle_tau = 0, socle_T = 0;
  BigInt socle_offset_dim = 0; // dim Hom*(E, E(mu_vee(a-)))
  std::vector<BigInt> failures; // offending tau-degrees i
  std::string message;
};

inline PairingReport perfect_pairing_check(const ExtAlgebra &B) {
  PairingReport r;
  const ChainVector &a = B.chain();
  const BigInt top = mu_vee(a.init());
  auto soc = B.socle();
  r.socle_dim = soc.size();
  if (soc.size() != 1) {
    r.ok = false;
    r.message = "socle is not one-dimensional";
    return r;
  }
  r.socle_tau = B.tau_T(soc[0]).first;
  r.socle_T = B.tau_T(soc[0]).second;
  std::map<BigInt, std::vector<std::size_t>> by_tau;
  for (std::size_t b = 0; b < B.dim(); ++b)
    by_tau[B.tau_T(b).first].push_back(b);
  r.socle_offset_dim = by_tau.count(top) ? by_tau[top].size() : 0;
  if (r.socle_offset_dim != 1 || r.socle_tau != top) {
    r.ok = false;
    r.message = "socle is not in tau-degree mu_vee(a-)";
  }
  for (BigInt i = 1; i < top; ++i) {
    auto &lo = by_tau[i];
    auto &hi = by_tau[top - i];
    bool good;
    if (lo.empty() && hi.empty())
      good = true;
    else if (lo.size() != 1 || hi.size() != 1)
      good = false;
    else {
      auto p = B.multiply(lo[0], hi[0]);
      good = p && p->index == soc[0] && p->coeff != 0;
    }
    if (!good) {
      r.ok = false;
      r.failures.push_back(i);
    }
  }
  if (!r.failures.empty() && r.message.empty())
    r.message = "degenerate pairing into the socle";
  return r;
}

} // namespace chaincat
