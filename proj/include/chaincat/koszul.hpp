#pragma once

#include "chaincat/grading.hpp"
#include "chaincat/polynomial.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>

namespace chaincat {

// Koszul matrix factorization of p = sum_v f_v q_v for monomials f_v.
// Basis e_J, J a subset of the generators (bitmask); differential
//   delta = sum_v ( f_v * contraction_v + q_v * wedge_v ),  delta^2 = p.
// Generator e_J sits in degree sum_{v in J}(deg f_v - T) - twist.
struct KoszulMF {
  std::size_t nvars = 0;
  Poly potential;
  std::vector<Monomial> gens;
  std::vector<Poly> cof;
  std::vector<BigInt> twist; // raw over xbar_1..xbar_nvars, pbar, T

  std::size_t rank() const { return std::size_t(1) << gens.size(); }
  bool variable_generated() const {
    for (auto &g : gens) {
      int total = 0;
      for (int x : g)
        total += x;
      if (total != 1)
        return false;
    }
    return true;
  }
};

inline int koszul_sign(unsigned mask, std::size_t v) {
  unsigned below = mask & ((1u << v) - 1u);
  return (__builtin_popcount(below) % 2) ? -1 : 1;
}

// Full differential as a rank x rank matrix of polynomials (row = target).
inline std::vector<std::vector<Poly>> koszul_differential(const KoszulMF &M) {
  const std::size_t r = M.rank();
  std::vector<std::vector<Poly>> D(r, std::vector<Poly>(r, Poly(M.nvars)));
  for (unsigned J = 0; J < r; ++J)
    for (std::size_t v = 0; v < M.gens.size(); ++v) {
      unsigned bit = 1u << v;
      int s = koszul_sign(J, v);
      if (J & bit)
        D[J ^ bit][J] = D[J ^ bit][J] + Poly::monomial(M.gens[v], s);
      else
        D[J | bit][J] = D[J | bit][J] + M.cof[v].scaled(s);
    }
  return D;
}

inline bool squares_to_potential(const KoszulMF &M) {
  auto D = koszul_differential(M);
  const std::size_t r = M.rank();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Poly acc(M.nvars);
      for (std::size_t k = 0; k < r; ++k)
        acc = acc + D[i][k] * D[k][j];
      if (!(acc == (i == j ? M.potential : Poly(M.nvars))))
        return false;
    }
  return true;
}

inline KoszulMF stab(const Poly &p, std::vector<Monomial> gens, std::vector<BigInt> twist = {}) {
  KoszulMF M;
  M.nvars = p.nvars();
  M.potential = p;
  M.gens = std::move(gens);
  if (M.gens.size() > 16)
    throw std::invalid_argument("too many Koszul generators");
  M.cof.assign(M.gens.size(), Poly(M.nvars));
  for (auto &[e, c] : p.terms()) {
    bool placed = false;
    for (std::size_t v = 0; v < M.gens.size() && !placed; ++v)
      if (divides(M.gens[v], e)) {
        Monomial q = e;
        for (std::size_t i = 0; i < q.size(); ++i)
          q[i] -= M.gens[v][i];
        M.cof[v].add(q, c);
        placed = true;
      }
    if (!placed)
      throw std::invalid_argument("ideal does not contain the potential");
  }
  M.twist = twist.empty() ? std::vector<BigInt>(M.nvars + 2) : std::move(twist);
  if (M.twist.size() != M.nvars + 2)
    throw std::invalid_argument("twist vector has wrong length");
  if (!squares_to_potential(M))
    throw std::logic_error("Koszul differential does not square to the potential");
  return M;
}

// variables given 1-based, as in x_1..x_n
inline KoszulMF stab_vars(const Poly &p, const std::vector<std::size_t> &vars, std::vector<BigInt> twist = {}) {
  std::vector<Monomial> g;
  for (std::size_t v : vars)
    g.push_back(unit_monomial(p.nvars(), v - 1));
  return stab(p, std::move(g), std::move(twist));
}

inline bool parity_split_even(const KoszulMF &M) {
  std::size_t even = 0;
  for (unsigned J = 0; J < M.rank(); ++J)
    even += (__builtin_popcount(J) % 2 == 0);
  return M.gens.empty() ? even == 1 : 2 * even == M.rank();
}

inline KoszulMF object_E(const ChainVector &a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> v;
  for (std::size_t i = (n % 2 == 0 ? 2 : 1); i <= n; i += 2)
    v.push_back(i);
  return stab_vars(chain_potential(a), v);
}

inline KoszulMF object_F(const ChainVector &a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> v;
  for (std::size_t i = (n % 2 == 0 ? 1 : 2); i + 1 <= n; i += 2)
    v.push_back(i);
  v.push_back(n);
  return stab_vars(chain_potential(a), v);
}

struct ExtWindow {
  std::vector<BigInt> twists;                  // tau-multiples k to scan
  std::optional<std::pair<BigInt, BigInt>> t;  // explicit t range, else the proven bound
};

struct ExtTable {
  std::map<std::pair<BigInt, BigInt>, BigInt> dims; // (k, t) -> dim Hom^t(M, N(k tau))
  bool conclusive = true;
  std::string note;
  BigInt total(const BigInt &k) const {
    BigInt s = 0;
    for (auto &[kt, v] : dims)
      if (kt.first == k)
        s += v;
    return s;
  }
};

namespace detail {

struct DegreeKey {
  BigInt i, t;
  bool operator<(const DegreeKey &o) const { return std::tie(i, t) < std::tie(o.i, o.t); }
};

class HomComplex {
public:
  HomComplex(const ChainVector &a, const KoszulMF &M, const KoszulMF &N)
      : a_(a), G_(build_Ltilde(a)), M_(M) {
    if (!N.variable_generated())
      throw std::invalid_argument("target must be generated by variables");
    if (M.nvars != a.size() || N.nvars != a.size())
      throw std::invalid_argument("objects live over a different potential");
    killed_.assign(a.size(), false);
    for (auto &g : N.gens)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i])
          killed_[i] = true;
    weights_ = canonical_weights(a);
    // C_lambda = sum_J S'_{g_J - twist_M + twist_N + lambda}
    const GroupElement shift = G_.group()->element(N.twist) - G_.group()->element(M.twist);
    for (unsigned J = 0; J < M.rank(); ++J) {
      GroupElement g = shift;
      for (std::size_t v = 0; v < M.gens.size(); ++v)
        if (J & (1u << v))
          g = g + monomial_degree(M.gens[v]) - G_.T();
      offsets_.push_back(g);
    }
    for (std::size_t v = 0; v < M.gens.size(); ++v) {
      restricted_gen_.push_back(Poly::monomial(M.gens[v]).restrict_zero(killed_));
      restricted_cof_.push_back(M.cof[v].restrict_zero(killed_));
    }
    for (std::size_t v = 0; v < M.nvars; ++v)
      if (!killed_[v])
        free_vars_.push_back(v);
  }

  const ChainGrading &grading() const { return G_; }

  Rational weight(const GroupElement &g) const {
    Rational w = 0;
    const auto &r = g.raw();
    for (std::size_t i = 0; i < a_.size(); ++i)
      w += Rational(r[i]) * weights_[i];
    w += Rational(r[a_.size()]);
    w += Rational(r[a_.size() + 1], 2);
    return w;
  }

  // weight range in which C_lambda can be nonzero
  Rational lower_weight_bound() const {
    std::optional<Rational> lo;
    for (auto &g : offsets_) {
      Rational w = -weight(g);
      if (!lo || w < *lo)
        lo = w;
    }
    return *lo;
  }

  std::size_t dim_H(const GroupElement &lambda) {
    const GroupElement T = G_.T();
    const auto &basis = chain_basis(lambda);
    std::size_t r_out = rank_of(lambda);
    std::size_t r_in = rank_of(lambda - T);
    return basis.size() - r_out - r_in;
  }

private:
  using Cell = std::pair<unsigned, Monomial>;

  GroupElement monomial_degree(const Monomial &e) const {
    GroupElement g = G_.group()->zero();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i])
        g = g + BigInt(e[i]) * G_.xbar(i + 1);
    return g;
  }

  // monomials in the surviving variables of exact degree g
  const std::vector<Monomial> &monomials_of(const GroupElement &g) {
    auto key = to_key(g);
    auto it = mono_cache_.find(key);
    if (it != mono_cache_.end())
      return it->second;
    std::vector<Monomial> out;
    Rational target = weight(g);
    if (target >= 0) {
      Monomial e(a_.size(), 0);
      std::function<void(std::size_t, Rational)> rec = [&](std::size_t idx, Rational left) {
        if (idx == free_vars_.size()) {
          if (left == 0 && to_key(monomial_degree(e)).i == key.i && to_key(monomial_degree(e)).t == key.t)
            out.push_back(e);
          return;
        }
        const std::size_t v = free_vars_[idx];
        const Rational w = weights_[v];
        for (int k = 0; Rational(k) * w <= left; ++k) {
          e[v] = k;
          rec(idx + 1, left - Rational(k) * w);
        }
        e[v] = 0;
      };
      rec(0, target);
    }
    return mono_cache_.emplace(key, std::move(out)).first->second;
  }

  DegreeKey to_key(const GroupElement &g) const {
    auto [i, t] = G_.decompose(g);
    return {i, t};
  }

  const std::vector<Cell> &chain_basis(const GroupElement &lambda) {
    auto key = to_key(lambda);
    auto it = basis_cache_.find(key);
    if (it != basis_cache_.end())
      return it->second;
    std::vector<Cell> cells;
    for (unsigned J = 0; J < offsets_.size(); ++J)
      for (auto &m : monomials_of(offsets_[J] + lambda))
        cells.emplace_back(J, m);
    return basis_cache_.emplace(key, std::move(cells)).first->second;
  }

  // rank of D : C_lambda -> C_{lambda + T}, (Df)_K = f(delta e_K)
  std::size_t rank_of(const GroupElement &lambda) {
    auto key = to_key(lambda);
    auto it = rank_cache_.find(key);
    if (it != rank_cache_.end())
      return it->second;
    const auto src = chain_basis(lambda);
    const auto dst = chain_basis(lambda + G_.T());
    std::map<Cell, std::size_t> row;
    for (std::size_t r = 0; r < dst.size(); ++r)
      row[dst[r]] = r;
    IntMatrix D(dst.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto &[J, m] = src[c];
      for (std::size_t v = 0; v < M_.gens.size(); ++v) {
        const unsigned bit = 1u << v;
        // f_J feeds (Df)_K through delta e_K:
        //   K = J | v (v not in J): coefficient sign * f_v
        //   K = J ^ v (v in J):     coefficient sign * q_v
        const unsigned K = J ^ bit;
        const Poly &coef = (J & bit) ? restricted_cof_[v] : restricted_gen_[v];
        const int s = koszul_sign(K, v);
        for (auto &[e, k] : coef.terms()) {
          Monomial prod = m;
          for (std::size_t i = 0; i < prod.size(); ++i)
            prod[i] += e[i];
          auto rit = row.find({K, prod});
          if (rit == row.end())
            throw std::logic_error("Hom complex differential leaves its target degree");
          D(rit->second, c) += s * k;
        }
      }
    }
    std::size_t r = rank_over_Q(D);
    rank_cache_[key] = r;
    return r;
  }

  ChainVector a_;
  ChainGrading G_;
  KoszulMF M_;
  std::vector<bool> killed_;
  std::vector<std::size_t> free_vars_;
  std::vector<Rational> weights_;
  std::vector<GroupElement> offsets_;
  std::vector<Poly> restricted_gen_, restricted_cof_;
  std::map<DegreeKey, std::vector<Monomial>> mono_cache_;
  std::map<DegreeKey, std::vector<Cell>> basis_cache_;
  std::map<DegreeKey, std::size_t> rank_cache_;
};

inline BigInt ceil_rational(const Rational &r) {
  BigInt q = numerator(r) / denominator(r);
  if (Rational(q) < r)
    q += 1;
  return q;
}
inline BigInt floor_rational(const Rational &r) {
  BigInt q = numerator(r) / denominator(r);
  if (Rational(q) > r)
    q -= 1;
  return q;
}

} // namespace detail

// dim Hom^t(M, N(k tau)) for the requested k. The t-range per k comes from
// the weight lower bound of the complex and, by Serre duality
// Hom(M, N(l)) = Hom(N, M(l_S - l))^*, the mirrored bound from the reverse
// complex. A narrower explicit t-range marks the table inconclusive.
inline ExtTable ext_table_mf(const ChainVector &a, const KoszulMF &M, const KoszulMF &N, const ExtWindow &win) {
  detail::HomComplex fwd(a, M, N);
  const ChainGrading &G = fwd.grading();
  Rational lo = fwd.lower_weight_bound();
  Rational hi;
  {
    // reverse complex only supplies a bound; it needs M to be variable generated too
    if (!M.variable_generated())
      throw std::invalid_argument("source must be generated by variables");
    detail::HomComplex rev(a, N, M);
    // the reverse complex's offsets are computed in its own group; weights agree
    GroupElement lS = serre_element(G);
    hi = fwd.weight(lS) - rev.lower_weight_bound();
  }
  const Rational wtau = fwd.weight(G.tau());
  ExtTable out;
  for (const BigInt &k : win.twists) {
    BigInt tmin = detail::ceil_rational(2 * (lo - Rational(k) * wtau));
    BigInt tmax = detail::floor_rational(2 * (hi - Rational(k) * wtau));
    BigInt from = tmin, to = tmax;
    if (win.t) {
      from = win.t->first;
      to = win.t->second;
      if (from > tmin || to < tmax) {
        out.conclusive = false;
        out.note = "requested t-window does not cover the support bound";
      }
    }
    for (BigInt t = from; t <= to; ++t) {
      std::size_t h = fwd.dim_H(G.recompose(k, t));
      if (h)
        out.dims[{k, t}] = h;
    }
    // one step past the bound on each side must vanish
    for (BigInt t : {BigInt(tmin - 1), BigInt(tmax + 1)})
      if (fwd.dim_H(G.recompose(k, t)) != 0) {
        out.conclusive = false;
        out.note = "nonzero cohomology outside the support bound";
      }
  }
  return out;
}

inline ExtWindow full_period(const ChainVector &a) {
  ExtWindow w;
  for (BigInt k = 0; k < d(a); ++k)
    w.twists.push_back(k);
  return w;
}

// ---- VGIT weights and windows -------------------------------------------

// c_k = (-1)^{n+k+1} a_1...a_{k-1} for k <= n, c_{n+1} = a_1...a_{n-1}
inline std::vector<BigInt> vgit_weights(const ChainVector &a) {
  const std::size_t n = a.size();
  if (n == 0)
    throw std::invalid_argument("vgit weights need n >= 1");
  std::vector<BigInt> c;
  for (std::size_t k = 1; k <= n; ++k)
    c.push_back(((n + k + 1) % 2 == 0 ? 1 : -1) * d(a.slice(1, k - 1)));
  c.push_back(d(a.slice(1, n - 1)));
  return c;
}

enum class Window { Minus, Plus };

inline std::pair<BigInt, BigInt> window_interval(const ChainVector &a, Window w) {
  const int n = static_cast<int>(a.size());
  if (w == Window::Minus)
    return {0, alpha(a, n - 1) - 1};
  return {0, d(a.slice(1, a.size() - 1)) + alpha(a, n - 2) - 1};
}

// lambda-weights of M|_0: sum of c over the generators in J, minus c(twist)
inline std::vector<BigInt> restriction_weights(const ChainVector &a, const KoszulMF &M) {
  auto c = vgit_weights(a);
  if (M.nvars != c.size())
    throw std::invalid_argument("object is not over the extended potential");
  std::vector<BigInt> gw;
  for (auto &g : M.gens) {
    BigInt s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += g[i] * c[i];
    gw.push_back(s);
  }
  BigInt shift = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    shift -= M.twist[i] * c[i];
  std::vector<BigInt> out;
  for (unsigned J = 0; J < M.rank(); ++J) {
    BigInt s = shift;
    for (std::size_t v = 0; v < gw.size(); ++v)
      if (J & (1u << v))
        s += gw[v];
    out.push_back(s);
  }
  return out;
}

inline bool window_check(const ChainVector &a, const KoszulMF &M, Window which) {
  auto [lo, hi] = window_interval(a, which);
  for (auto &w : restriction_weights(a, M))
    if (w < lo || w > hi)
      return false;
  return true;
}

// stab(x1, x3, ..., x_{n-1}, x_n x_{n+1})(-i xbar_1)  for even n,
// stab(x2, x4, ..., x_{n-1}, x_n x_{n+1})(i xbar_1)   for odd n
inline KoszulMF window_object(const ChainVector &a, const BigInt &i) {
  const std::size_t n = a.size();
  Poly W = vgit_potential(a);
  std::vector<Monomial> g;
  for (std::size_t k = (n % 2 == 0 ? 1 : 2); k + 1 <= n; k += 2)
    g.push_back(unit_monomial(n + 1, k - 1));
  Monomial last(n + 1, 0);
  last[n - 1] = 1;
  last[n] = 1;
  g.push_back(last);
  std::vector<BigInt> twist(n + 3);
  twist[0] = (n % 2 == 0) ? BigInt(-i) : i;
  return stab(W, g, twist);
}

} // namespace chaincat
