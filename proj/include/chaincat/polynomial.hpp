#pragma once

#include "chaincat/chain.hpp"

#include <map>
#include <vector>

namespace chaincat {

using Monomial = std::vector<int>;

// Sparse multivariate polynomial with exact integer coefficients.
class Poly {
public:
  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  static Poly monomial(const Monomial &e, BigInt c = 1) {
    Poly p(e.size());
    p.add(e, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, BigInt> &terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add(const Monomial &e, const BigInt &c) {
    if (c.is_zero())
      return;
    auto &slot = t_[e];
    slot += c;
    if (slot.is_zero())
      t_.erase(e);
  }

  Poly operator+(const Poly &o) const {
    Poly r = *this;
    for (auto &[e, c] : o.t_)
      r.add(e, c);
    return r;
  }
  Poly operator-(const Poly &o) const {
    Poly r = *this;
    for (auto &[e, c] : o.t_)
      r.add(e, -c);
    return r;
  }
  Poly operator*(const Poly &o) const {
    Poly r(nvars_);
    for (auto &[e, c] : t_)
      for (auto &[f, k] : o.t_) {
        Monomial g = e;
        for (std::size_t i = 0; i < g.size(); ++i)
          g[i] += f[i];
        r.add(g, c * k);
      }
    return r;
  }
  Poly scaled(const BigInt &k) const {
    Poly r(nvars_);
    for (auto &[e, c] : t_)
      r.add(e, c * k);
    return r;
  }
  // drop every term containing one of the given variables
  Poly restrict_zero(const std::vector<bool> &killed) const {
    Poly r(nvars_);
    for (auto &[e, c] : t_) {
      bool keep = true;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (killed[i] && e[i] > 0)
          keep = false;
      if (keep)
        r.add(e, c);
    }
    return r;
  }
  bool operator==(const Poly &o) const { return t_ == o.t_; }

private:
  std::size_t nvars_ = 0;
  std::map<Monomial, BigInt> t_;
};

inline bool divides(const Monomial &f, const Monomial &e) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > e[i])
      return false;
  return true;
}

inline Monomial unit_monomial(std::size_t nvars, std::size_t var) {
  Monomial e(nvars, 0);
  e.at(var) = 1;
  return e;
}

// x1^{a1} x2 + ... + x_{n-1}^{a_{n-1}} x_n + x_n^{a_n}; variables 0-based
inline Poly chain_potential(const ChainVector &a) {
  const std::size_t n = a.size();
  Poly p(n);
  for (std::size_t k = 1; k <= n; ++k) {
    Monomial e(n, 0);
    e[k - 1] = a[k];
    if (k < n)
      e[k] = 1;
    p.add(e, 1);
  }
  return p;
}

// the (n+1)-variable potential with last term x_n^{a_n} x_{n+1}^{a_n}
inline Poly vgit_potential(const ChainVector &a) {
  const std::size_t n = a.size();
  Poly p(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    Monomial e(n + 1, 0);
    e[k - 1] = a[k];
    if (k < n)
      e[k] = 1;
    else
      e[n] = a[n];
    p.add(e, 1);
  }
  return p;
}

} // namespace chaincat
