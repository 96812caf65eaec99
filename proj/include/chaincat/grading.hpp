#pragma once

#include "chaincat/smith.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace chaincat {

class GradingGroup;
using GroupPtr = std::shared_ptr<const GradingGroup>;

// Element of a finitely presented abelian group. Keeps the raw coefficient
// vector over the generators; equality goes through canonical coordinates.
class GroupElement {
public:
  GroupElement() = default;
  GroupElement(GroupPtr g, std::vector<BigInt> raw) : g_(std::move(g)), raw_(std::move(raw)) {}

  const GroupPtr &group() const { return g_; }
  const std::vector<BigInt> &raw() const { return raw_; }
  std::vector<BigInt> canonical() const;

  GroupElement operator+(const GroupElement &o) const { return combine(o, 1); }
  GroupElement operator-(const GroupElement &o) const { return combine(o, -1); }
  GroupElement operator-() const {
    auto r = raw_;
    for (auto &x : r)
      x = -x;
    return {g_, r};
  }
  friend GroupElement operator*(const BigInt &k, const GroupElement &e) {
    auto r = e.raw_;
    for (auto &x : r)
      x *= k;
    return {e.g_, r};
  }
  friend GroupElement operator*(long long k, const GroupElement &e) { return BigInt(k) * e; }
  bool operator==(const GroupElement &o) const;
  bool is_zero() const;

private:
  GroupElement combine(const GroupElement &o, int sign) const {
    if (g_ != o.g_)
      throw std::logic_error("arithmetic between elements of different grading groups");
    auto r = raw_;
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] += sign * o.raw_[i];
    return {g_, r};
  }
  GroupPtr g_;
  std::vector<BigInt> raw_;
};

// Chart g = i*u + t*v with u of finite order modulo <v> and v of infinite
// order. period_u * u + period_v * v = 0 generates all relations between u, v.
struct PairChart {
  std::vector<std::pair<BigInt, BigInt>> gen_coords; // image of each generator
  BigInt period_u, period_v;
};

class GradingGroup : public std::enable_shared_from_this<GradingGroup> {
public:
  GradingGroup(std::vector<std::string> labels, IntMatrix relations)
      : labels_(std::move(labels)), rel_(std::move(relations)), snf_(smith_normal_form(rel_)) {
    if (rel_.cols() != labels_.size())
      throw std::invalid_argument("relation matrix width != generator count");
  }

  const std::vector<std::string> &labels() const { return labels_; }
  const IntMatrix &relations() const { return rel_; }
  const SmithForm &smith() const { return snf_; }
  std::size_t generator_count() const { return labels_.size(); }

  // canonical coordinates: y = x V, torsion slots reduced, unit slots dropped
  std::vector<BigInt> canonical(const std::vector<BigInt> &x) const {
    const std::size_t g = labels_.size();
    std::vector<BigInt> y;
    for (std::size_t j = 0; j < g; ++j) {
      BigInt yj = 0;
      for (std::size_t k = 0; k < g; ++k)
        if (!x[k].is_zero() && !snf_.V(k, j).is_zero())
          yj += x[k] * snf_.V(k, j);
      if (j < snf_.rank) {
        BigInt dj = snf_.diag(j);
        if (dj == 1)
          continue;
        yj %= dj;
        if (yj < 0)
          yj += dj;
      }
      y.push_back(yj);
    }
    return y;
  }

  // Invariant factors of the torsion part, and the free rank.
  std::vector<BigInt> torsion() const {
    std::vector<BigInt> t;
    for (std::size_t j = 0; j < snf_.rank; ++j)
      if (snf_.diag(j) != 1)
        t.push_back(snf_.diag(j));
    return t;
  }
  std::size_t free_rank() const { return labels_.size() - snf_.rank; }

  GroupElement element(std::vector<BigInt> raw) const {
    if (raw.size() != labels_.size())
      throw std::invalid_argument("raw vector has wrong length");
    return {shared_from_this(), std::move(raw)};
  }
  GroupElement zero() const { return element(std::vector<BigInt>(labels_.size())); }
  GroupElement generator(std::size_t k) const {
    auto r = std::vector<BigInt>(labels_.size());
    r.at(k) = 1;
    return element(std::move(r));
  }
  GroupElement generator(const std::string &label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] == label)
        return generator(k);
    throw std::invalid_argument("no generator named " + label);
  }

  PairChart make_chart(const GroupElement &u, const GroupElement &v) const {
    check_owner(u);
    check_owner(v);
    const std::size_t g = labels_.size();
    IntMatrix M(2 + rel_.rows(), g);
    for (std::size_t j = 0; j < g; ++j) {
      M(0, j) = u.raw()[j];
      M(1, j) = v.raw()[j];
      for (std::size_t r = 0; r < rel_.rows(); ++r)
        M(2 + r, j) = rel_(r, j);
    }
    auto s = smith_normal_form(M);
    PairChart c;
    std::vector<std::vector<BigInt>> kernel;
    for (std::size_t k = 0; k < g; ++k) {
      std::vector<BigInt> e(g);
      e[k] = 1;
      auto sol = solve_left(M, e, s);
      if (!sol)
        throw std::logic_error("chart generators do not generate the group");
      c.gen_coords.emplace_back(sol->particular[0], sol->particular[1]);
      if (kernel.empty())
        kernel = sol->kernel;
    }
    // lattice of (i, t) with i u + t v = 0, reduced to one generator
    BigInt p = 0, q = 0;
    for (auto &z : kernel) {
      BigInt a = z[0], b = z[1];
      // merge (a, b) into (p, q) by Euclid on the first coordinate
      while (!a.is_zero()) {
        BigInt k = p / a;
        p -= k * a;
        q -= k * b;
        std::swap(p, a);
        std::swap(q, b);
      }
      if (!b.is_zero())
        throw std::logic_error("second chart generator has finite order");
    }
    if (p.is_zero())
      throw std::logic_error("first chart generator has infinite order");
    if (p < 0) {
      p = -p;
      q = -q;
    }
    c.period_u = p;
    c.period_v = q;
    return c;
  }

  std::pair<BigInt, BigInt> decompose(const PairChart &c, const GroupElement &e) const {
    check_owner(e);
    BigInt i = 0, t = 0;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      if (e.raw()[k].is_zero())
        continue;
      i += e.raw()[k] * c.gen_coords[k].first;
      t += e.raw()[k] * c.gen_coords[k].second;
    }
    BigInt qd = i / c.period_u;
    if (i - qd * c.period_u < 0)
      qd -= 1;
    return {i - qd * c.period_u, t - qd * c.period_v};
  }

private:
  void check_owner(const GroupElement &e) const {
    if (e.group().get() != this)
      throw std::logic_error("element belongs to a different grading group");
  }
  std::vector<std::string> labels_;
  IntMatrix rel_;
  SmithForm snf_;
};

inline std::vector<BigInt> GroupElement::canonical() const { return g_->canonical(raw_); }
inline bool GroupElement::operator==(const GroupElement &o) const {
  if (g_ != o.g_)
    throw std::logic_error("comparison between elements of different grading groups");
  return canonical() == o.canonical();
}
inline bool GroupElement::is_zero() const {
  for (auto &x : canonical())
    if (!x.is_zero())
      return false;
  return true;
}

// L_a or its extension by T. Generator order: xbar_1..xbar_n, pbar[, T].
class ChainGrading {
public:
  ChainGrading(const ChainVector &a, bool with_T) : a_(a), with_T_(with_T) {
    const std::size_t n = a.size();
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= n; ++i)
      labels.push_back("x" + std::to_string(i));
    labels.push_back("p");
    if (with_T)
      labels.push_back("T");
    const std::size_t g = labels.size();
    IntMatrix R(n + (with_T ? 1 : 0), g);
    // a_i x_i + x_{i+1} - p = 0 ; a_n x_n - p = 0
    for (std::size_t i = 1; i <= n; ++i) {
      R(i - 1, i - 1) = a[i];
      if (i < n)
        R(i - 1, i) = 1;
      R(i - 1, n) = -1;
    }
    if (with_T) {
      R(n, n + 1) = 2;
      R(n, n) = -1;
    }
    group_ = std::make_shared<GradingGroup>(std::move(labels), std::move(R));
    const GroupElement v = with_T ? T() : pbar();
    chart_ = group_->make_chart(tau(), v);
    if (chart_.period_u != d(a))
      throw std::logic_error("quotient by the infinite-order generator is not cyclic of order d(a)");
    if (with_T) {
      // d tau = (-1)^n 2 (d - mu) T, i.e. the chart relation must read (d, -that)
      BigInt rhs = (n % 2 == 0 ? 1 : -1) * 2 * (d(a) - mu(a));
      if (chart_.period_v != -rhs || !(d(a) * tau() == rhs * T()))
        throw std::logic_error("tau/T relation fails in the extended grading group");
    }
  }

  const ChainVector &chain() const { return a_; }
  const GroupPtr &group() const { return group_; }
  bool has_T() const { return with_T_; }

  GroupElement xbar(std::size_t i) const {
    if (i < 1 || i > a_.size())
      throw std::out_of_range("xbar index out of range");
    return group_->generator(i - 1);
  }
  GroupElement pbar() const { return group_->generator(a_.size()); }
  GroupElement T() const {
    if (!with_T_)
      throw std::logic_error("group has no T generator");
    return group_->generator(a_.size() + 1);
  }
  // tau = (-1)^n xbar_1 ; zero for the empty chain
  GroupElement tau() const {
    if (a_.empty())
      return group_->zero();
    return (a_.size() % 2 == 0 ? 1 : -1) * xbar(1);
  }

  // unique (i, t) with g = i tau + t T (or t pbar without T), 0 <= i < d(a)
  std::pair<BigInt, BigInt> decompose(const GroupElement &g) const { return group_->decompose(chart_, g); }
  GroupElement recompose(const BigInt &i, const BigInt &t) const {
    return i * tau() + t * (with_T_ ? T() : pbar());
  }
  const PairChart &chart() const { return chart_; }

private:
  ChainVector a_;
  bool with_T_;
  GroupPtr group_;
  PairChart chart_;
};

inline ChainGrading build_L(const ChainVector &a) { return ChainGrading(a, false); }
inline ChainGrading build_Ltilde(const ChainVector &a) { return ChainGrading(a, true); }

inline std::pair<BigInt, BigInt> tau_T_decompose(const ChainGrading &G, const GroupElement &g) {
  return G.decompose(g);
}

// Closed-form degree of the generator x_i of B_a (x_0 only for odd n).
inline GroupElement deg_xi(const ChainGrading &G, std::size_t i) {
  const ChainVector &a = G.chain();
  const std::size_t n = a.size();
  if (i == 0) {
    if (n % 2 == 0)
      throw std::invalid_argument("x_0 exists only for odd n");
    return G.tau() + G.T();
  }
  if (i > n)
    throw std::out_of_range("generator index out of range");
  ChainVector pre = a.slice(1, i - 1);
  BigInt c1 = (i % 2 == 1 ? 1 : -1) * d(pre);
  BigInt cT = (i % 2 == 0 ? 1 : -1) * 2 * (d(pre) - mu(pre));
  return c1 * G.xbar(1) + cT * G.T();
}

inline GroupElement serre_element(const ChainGrading &G) {
  const std::size_t n = G.chain().size();
  GroupElement l = BigInt(n) * G.T();
  for (std::size_t i = 1; i <= n; ++i)
    l = l - G.xbar(i);
  return l;
}

// N with  -(xbar_2 + xbar_4 + ... + xbar_{n-2}) = alpha_{n-3} tau + N pbar   (n even)
//         -(xbar_1 + xbar_3 + ... + xbar_{n-2}) = alpha_{n-3} tau + N pbar   (n odd)
inline BigInt N_of_n(const ChainVector &a) {
  const std::size_t n = a.size();
  if (n < 2)
    throw std::invalid_argument("N(n) needs n >= 2");
  ChainGrading L = build_L(a);
  GroupElement lhs = L.group()->zero();
  for (std::size_t i = (n % 2 == 0 ? 2 : 1); i + 2 <= n; i += 2)
    lhs = lhs - L.xbar(i);
  GroupElement rest = lhs - alpha(a, static_cast<int>(n) - 3) * L.tau();
  auto [i, t] = L.decompose(rest);
  if (!i.is_zero())
    throw std::logic_error("N(n) relation has no solution");
  if (!(rest == t * L.pbar()))
    throw std::logic_error("N(n) solution failed verification");
  return t;
}

} // namespace chaincat
