#pragma once

#include "chaincat/ext_algebra.hpp"

#include <optional>
#include <queue>

namespace chaincat {

using KClass = std::vector<BigInt>;

struct KClassSequence {
  std::vector<KClass> classes;
  IntMatrix form; // ambient Euler form
};

inline BigInt euler_pair(const IntMatrix &A, const KClass &x, const KClass &y) {
  BigInt s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero())
      continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!y[j].is_zero() && !A(i, j).is_zero())
        s += x[i] * A(i, j) * y[j];
  }
  return s;
}

// S with G^T = G S, i.e. chi(x, y) = chi(y, S x)
inline IntMatrix serre_operator(const IntMatrix &G) { return G.unitriangular_inverse() * G.transpose(); }

// Classes t_{2-N}, ..., t_0, t_1 where t_1..t_n is the standard basis and
// t_{j-n} = S t_j.
inline KClassSequence helix_segment(const IntMatrix &G, std::size_t N) {
  if (!G.is_upper_unitriangular())
    throw std::invalid_argument("helix_segment needs a unitriangular Gram matrix");
  if (N < 1)
    throw std::invalid_argument("helix segment length must be >= 1");
  const std::size_t n = G.rows();
  const IntMatrix S = serre_operator(G);
  // store t_j for j = 1 - (N - 1) ... n, at position j + N - 2
  const long long lo = 2 - static_cast<long long>(N);
  std::vector<KClass> t(static_cast<std::size_t>(static_cast<long long>(n) - lo + 1));
  auto at = [&](long long j) -> KClass & { return t[static_cast<std::size_t>(j - lo)]; };
  for (std::size_t j = 1; j <= n; ++j) {
    KClass e(n);
    e[j - 1] = 1;
    at(static_cast<long long>(j)) = e;
  }
  for (long long j = 0; j >= lo; --j)
    at(j) = S.apply(at(j + static_cast<long long>(n)));
  KClassSequence seq{{}, G};
  for (long long j = lo; j <= 1; ++j)
    seq.classes.push_back(at(j));
  return seq;
}

inline IntMatrix directed_form(const KClassSequence &seq) {
  const std::size_t N = seq.classes.size();
  std::vector<KClass> At;
  At.reserve(N);
  for (auto &c : seq.classes)
    At.push_back(seq.form.apply(c));
  auto dot = [](const KClass &x, const KClass &y) {
    BigInt s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!x[i].is_zero() && !y[i].is_zero())
        s += x[i] * y[i];
    return s;
  };
  IntMatrix M(N, N);
  for (std::size_t p = 0; p < N; ++p) {
    if (dot(seq.classes[p], At[p]) != 1)
      throw std::logic_error("helix member is not exceptional at K-level");
    M(p, p) = 1;
    for (std::size_t q = p + 1; q < N; ++q)
      M(p, q) = dot(seq.classes[p], At[q]);
  }
  return M;
}

struct LeftDual {
  std::vector<KClass> classes; // F_{-n}, ..., F_0 in the original basis
  IntMatrix gram;              // chi among the F's in that order
  IntMatrix cross;             // cross(i, r) = chi(E_i, r-th F)
};

// F_{-i} = L_{E_0} ... L_{E_{i-1}} E_i with [L_u v] = [v] - chi(u, v)[u]
inline LeftDual left_dual(const IntMatrix &G) {
  if (!G.is_upper_unitriangular())
    throw std::invalid_argument("left_dual needs a unitriangular Gram matrix");
  const std::size_t n = G.rows();
  std::vector<KClass> F(n);
  for (std::size_t i = 0; i < n; ++i) {
    KClass v(n);
    v[i] = 1;
    for (std::size_t k = i; k-- > 0;) {
      KClass u(n);
      u[k] = 1;
      BigInt c = euler_pair(G, u, v);
      if (!c.is_zero())
        v[k] -= c;
    }
    F[i] = v;
  }
  LeftDual out;
  for (std::size_t r = 0; r < n; ++r)
    out.classes.push_back(F[n - 1 - r]);
  out.gram = IntMatrix(n, n);
  out.cross = IntMatrix(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      out.gram(p, q) = euler_pair(G, out.classes[p], out.classes[q]);
      KClass e(n);
      e[p] = 1;
      out.cross(p, q) = euler_pair(G, e, out.classes[q]);
    }
  return out;
}

// Gram of the right dual: J G^{-T} J
inline IntMatrix right_dual(const IntMatrix &G) {
  const std::size_t n = G.rows();
  IntMatrix inv_t = G.unitriangular_inverse().transpose();
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = inv_t(n - 1 - i, n - 1 - j);
  return out;
}

inline IntMatrix recursion_R(const IntMatrix &G, std::size_t N) {
  return right_dual(directed_form(helix_segment(G, N)));
}

// Sign vector eps with D G1 D = G2, D = diag(eps). Signs are forced along the
// graph of nonzero off-diagonal entries; each connected component is seeded
// with +1, which loses nothing since no entry couples different components.
inline std::optional<std::vector<int>> shift_equivalent(const IntMatrix &G1, const IntMatrix &G2) {
  if (G1.rows() != G2.rows() || G1.cols() != G2.cols() || G1.rows() != G1.cols())
    throw std::invalid_argument("shift_equivalent: size mismatch");
  const std::size_t n = G1.rows();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const BigInt &x = G1(i, j), &y = G2(i, j);
      if (x.is_zero() != y.is_zero() || abs(x) != abs(y))
        return std::nullopt;
      if (i != j && !x.is_zero())
        adj[i].push_back({j, x == y ? 1 : -1});
      if (i == j && x != y)
        return std::nullopt;
    }
  std::vector<int> eps(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (eps[s])
      continue;
    eps[s] = 1;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop();
      for (auto [j, rel] : adj[i]) {
        int want = eps[i] * rel;
        if (!eps[j]) {
          eps[j] = want;
          q.push(j);
        } else if (eps[j] != want) {
          return std::nullopt;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (eps[i] * eps[j] * G1(i, j) != G2(i, j))
        return std::nullopt;
  return eps;
}

struct RecursionReport {
  ChainVector a;
  bool pass = false;
  std::size_t N = 0;
  std::vector<int> eps;
  // predicted (-1)^{floor(i/m)(n + 2m(a-) - 1)}, recorded only
  std::vector<int> predicted_eps;
  bool predicted_matches = false;
  std::optional<std::pair<std::size_t, std::size_t>> counterexample;
  IntMatrix recursed, target;
};

inline RecursionReport verify_recursion(const ChainVector &a) {
  if (a.empty())
    throw std::invalid_argument("verify_recursion needs n >= 1");
  RecursionReport r;
  r.a = a;
  r.N = static_cast<std::size_t>(mu_vee(a));
  ChainVector prev = a.init();
  r.recursed = recursion_R(gram_AT(prev), r.N);
  r.target = gram_AT(a);
  auto eps = shift_equivalent(r.recursed, r.target);
  if (eps) {
    r.pass = true;
    r.eps = *eps;
  } else {
    for (std::size_t i = 0; i < r.N && !r.counterexample; ++i)
      for (std::size_t j = 0; j < r.N; ++j)
        if (abs(r.recursed(i, j)) != abs(r.target(i, j))) {
          r.counterexample = {i, j};
          break;
        }
  }
  const BigInt m = mu_vee(prev);
  const BigInt expo = BigInt(a.size()) + 2 * serre_m(prev) - 1;
  for (std::size_t i = 0; i < r.N; ++i) {
    BigInt e = (BigInt(i) / m) * expo;
    r.predicted_eps.push_back(e % 2 == 0 ? 1 : -1);
  }
  if (r.pass) {
    // equivalence classes of sign vectors: eps and -eps describe the same shifts
    bool same = r.eps == r.predicted_eps, flipped = true;
    for (std::size_t i = 0; i < r.N; ++i)
      flipped = flipped && r.eps[i] == -r.predicted_eps[i];
    r.predicted_matches = same || flipped;
  }
  return r;
}

} // namespace chaincat
