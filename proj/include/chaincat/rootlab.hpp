#pragma once

#include "chaincat/chain.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaincat {

using Cplx = std::complex<double>;
using CPoly = std::vector<Cplx>; // increasing degree

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Cplx ipow(Cplx z, long long k) {
  if (k < 0)
    return 1.0 / ipow(z, -k);
  Cplx r = 1.0;
  while (k) {
    if (k & 1)
      r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

inline double to_double(const Rational &q) { return q.convert_to<double>(); }
inline long long to_ll(const BigInt &x) { return x.convert_to<long long>(); }

// ---- polynomial helpers -------------------------------------------------

inline CPoly poly_mul(const CPoly &p, const CPoly &q) {
  CPoly r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      r[i + j] += p[i] * q[j];
  return r;
}

inline CPoly poly_pow(const CPoly &p, long long k) {
  CPoly r{1.0};
  for (long long i = 0; i < k; ++i)
    r = poly_mul(r, p);
  return r;
}

inline CPoly poly_sub(CPoly p, const CPoly &q) {
  if (q.size() > p.size())
    p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    p[i] -= q[i];
  return p;
}

// s + t z^a
inline CPoly binomial_base(Cplx s, Cplx t, long long a) {
  CPoly p(static_cast<std::size_t>(a) + 1, 0.0);
  p[0] += s;
  p[static_cast<std::size_t>(a)] += t;
  return p;
}

// value, derivative, and sum_k |c_k| |z|^k (the scale for relative residuals)
struct PolyEval {
  Cplx value, deriv;
  double scale;
};

inline PolyEval poly_eval(const CPoly &p, Cplx z) {
  Cplx v = 0.0, dv = 0.0;
  double sc = 0.0;
  const double az = std::abs(z);
  for (std::size_t i = p.size(); i-- > 0;) {
    dv = dv * z + v;
    v = v * z + p[i];
    sc = sc * az + std::abs(p[i]);
  }
  return {v, dv, sc};
}

// |p(z)| / sum |c_k| |z|^k; for |z| > 1 both sides are divided by |z|^deg
// so high degrees do not overflow
inline double relative_residual(const CPoly &p, Cplx z) {
  PolyEval e;
  if (std::abs(z) > 1.0) {
    CPoly rev(p.rbegin(), p.rend());
    e = poly_eval(rev, 1.0 / z);
  } else {
    e = poly_eval(p, z);
  }
  return e.scale > 0 ? std::abs(e.value) / e.scale : std::abs(e.value);
}

// p'(z)/p(z), evaluated through the reversed polynomial when |z| > 1 so
// that high powers of large roots never overflow
inline Cplx log_derivative(const CPoly &p, Cplx z) {
  const std::size_t n = p.size() - 1;
  if (std::abs(z) <= 1.0) {
    auto e = poly_eval(p, z);
    return e.deriv / e.value;
  }
  CPoly rev(p.rbegin(), p.rend());
  const Cplx w = 1.0 / z;
  auto e = poly_eval(rev, w);
  return static_cast<double>(n) / z - w * w * e.deriv / e.value;
}

inline double max_relative_residual(const CPoly &p, const std::vector<Cplx> &roots) {
  double r = 0.0;
  for (auto z : roots)
    r = std::max(r, relative_residual(p, z));
  return r;
}

// Simultaneous Aberth-Ehrlich refinement of all roots (p has p[0] != 0).
inline void aberth(const CPoly &p, std::vector<Cplx> &z, int max_iter = 500) {
  const std::size_t n = z.size();
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k])
        continue;
      const Cplx ld = log_derivative(p, z[k]);
      if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag())) {
        done[k] = true; // exact root
        continue;
      }
      Cplx rep = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k)
          rep += 1.0 / (z[k] - z[j]);
      const Cplx step = 1.0 / (ld - rep);
      z[k] -= step;
      if (std::abs(step) <= 1e-15 * std::abs(z[k]))
        done[k] = true;
      else
        all = false;
    }
    if (all)
      break;
  }
}

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|c_k|), one circle per hull edge.
inline std::vector<Cplx> newton_polygon_starts(const CPoly &p) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != Cplx(0.0))
      pts.push_back({static_cast<double>(k), std::log(std::abs(p[k]))});
  std::vector<std::pair<double, double>> hull;
  for (auto &q : pts) {
    while (hull.size() >= 2) {
      auto &o = hull[hull.size() - 2], &m = hull.back();
      const double cross = (m.first - o.first) * (q.second - o.second) - (m.second - o.second) * (q.first - o.first);
      if (cross >= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(q);
  }
  std::vector<Cplx> z;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int cnt = static_cast<int>(hull[e + 1].first - hull[e].first);
    const double r = std::exp((hull[e].second - hull[e + 1].second) / cnt);
    for (int m = 0; m < cnt; ++m)
      z.push_back(std::polar(r, kTwoPi * m / cnt + 0.4 + 0.1 * static_cast<double>(e)));
  }
  return z;
}

// All roots with multiplicity. Exact zero roots are split off; the rest come
// from Aberth iteration started on Newton-polygon circles. If that leaves a
// residual above 1e-13 the balanced companion matrix is tried as well and
// the better root set is kept. The companion route alone is slow and loses
// roots once the coefficients span hundreds of decades.
inline std::vector<Cplx> poly_roots(CPoly p) {
  while (!p.empty() && p.back() == Cplx(0.0))
    p.pop_back();
  if (p.size() <= 1) {
    if (p.empty())
      throw std::invalid_argument("zero polynomial has no finite root set");
    return {};
  }
  std::size_t lead_zero = 0;
  while (p[lead_zero] == Cplx(0.0))
    ++lead_zero;
  std::vector<Cplx> roots(lead_zero, 0.0);
  CPoly q(p.begin() + static_cast<std::ptrdiff_t>(lead_zero), p.end());
  std::vector<Cplx> found;
  if (q.size() == 2) {
    found.push_back(-q[0] / q[1]);
  } else if (q.size() > 2) {
    found = newton_polygon_starts(q);
    aberth(q, found);
    if (!(max_relative_residual(q, found) <= 1e-13)) {
      Eigen::Matrix<Cplx, Eigen::Dynamic, 1> c(static_cast<Eigen::Index>(q.size()));
      for (std::size_t i = 0; i < q.size(); ++i)
        c[static_cast<Eigen::Index>(i)] = q[i];
      Eigen::PolynomialSolver<Cplx, Eigen::Dynamic> solver(c);
      std::vector<Cplx> alt;
      for (Eigen::Index i = 0; i < solver.roots().size(); ++i)
        alt.push_back(solver.roots()[i]);
      // the solver silently drops leading coefficients it deems negligible
      bool usable = alt.size() == q.size() - 1;
      for (auto z : alt)
        usable = usable && std::isfinite(z.real()) && std::isfinite(z.imag()) && z != Cplx(0.0);
      if (usable) {
        aberth(q, alt);
        if (max_relative_residual(q, alt) < max_relative_residual(q, found))
          found = alt;
      }
    }
  }
  for (auto &z : found) {
    for (int it = 0; it < 4; ++it) {
      const Cplx ld = log_derivative(q, z);
      if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag()) || ld == Cplx(0.0))
        break;
      Cplx next = z - 1.0 / ld;
      if (relative_residual(q, next) < relative_residual(q, z))
        z = next;
      else
        break;
    }
    roots.push_back(z);
  }
  return roots;
}

// ---- the root family z^{mu-} = c (s + t z^a)^{d-} ------------------------

struct FamilyParams {
  long long a = 2, mu = 1, mu_minus = 1, d_minus = 1;
  double c = 1.0;
  Cplx t = 1e-3, s = 1e-3;
};

enum class RootClass { Small, Large, Violation };

inline const char *to_string(RootClass c) {
  switch (c) {
  case RootClass::Small:
    return "small";
  case RootClass::Large:
    return "large";
  default:
    return "annulus";
  }
}

struct RootScene {
  FamilyParams params;
  std::vector<Cplx> roots;
  std::vector<RootClass> cls;
  std::vector<double> residuals;
  std::size_t small = 0, large = 0, violations = 0;
  double max_residual = 0.0;
};

inline CPoly family_poly(const FamilyParams &p) {
  CPoly lhs = poly_pow(binomial_base(p.s, p.t, p.a), p.d_minus);
  for (auto &x : lhs)
    x *= p.c;
  CPoly zm(static_cast<std::size_t>(p.mu_minus) + 1, 0.0);
  zm.back() = 1.0;
  return poly_sub(lhs, zm);
}

inline RootScene solve_family(const FamilyParams &p) {
  if (p.mu + p.mu_minus != p.a * p.d_minus)
    throw std::invalid_argument("family needs mu + mu_minus = a * d_minus");
  if (!(p.c > 0))
    throw std::invalid_argument("family constant must be positive");
  // c |t|^{d-} and c |s|^{d-} must be representable, else terms vanish silently
  for (Cplx x : {p.t, p.s})
    if (x != Cplx(0.0) && std::log10(p.c) + static_cast<double>(p.d_minus) * std::log10(std::abs(x)) < -290.0)
      throw std::range_error("family coefficients underflow double precision");
  RootScene sc;
  sc.params = p;
  if (p.t == Cplx(0.0) && p.s == Cplx(0.0)) {
    sc.roots.assign(static_cast<std::size_t>(p.mu_minus), 0.0);
  } else if (p.t == Cplx(0.0)) {
    // closed form: the mu- roots of c s^{d-}
    const Cplx w = p.c * ipow(p.s, p.d_minus);
    const double r = std::pow(std::abs(w), 1.0 / static_cast<double>(p.mu_minus));
    const double th = std::arg(w);
    for (long long m = 0; m < p.mu_minus; ++m)
      sc.roots.push_back(std::polar(r, (th + kTwoPi * static_cast<double>(m)) / static_cast<double>(p.mu_minus)));
  } else {
    sc.roots = poly_roots(family_poly(p));
  }
  const CPoly f = family_poly(p);
  for (auto &z : sc.roots) {
    const double az = std::abs(z);
    RootClass c = az <= 0.5 ? RootClass::Small : (az >= 2.0 ? RootClass::Large : RootClass::Violation);
    sc.cls.push_back(c);
    (c == RootClass::Small ? sc.small : c == RootClass::Large ? sc.large : sc.violations) += 1;
    sc.residuals.push_back(relative_residual(f, z));
    sc.max_residual = std::max(sc.max_residual, sc.residuals.back());
  }
  return sc;
}

// ---- darts --------------------------------------------------------------

inline double wrap_angle(double x) { // into (-pi, pi]
  x = std::fmod(x, kTwoPi);
  if (x <= -std::numbers::pi)
    x += kTwoPi;
  if (x > std::numbers::pi)
    x -= kTwoPi;
  return x;
}

inline double wrap_positive(double x) { // into [0, 2 pi)
  x = std::fmod(x, kTwoPi);
  return x < 0 ? x + kTwoPi : x;
}

struct DartSpec {
  double eps = 0.5; // radius (inner) or r (outer)
  long long n = 1;
  double phi = 0.0;
  double gamma = 0.0;
  bool outer = false;

  bool contains(Cplx z, double margin = 1e-10) const {
    const double az = std::abs(z);
    if (outer ? !(az > eps * (1 + margin)) : !(az < eps * (1 - margin)))
      return false;
    // z^n within n*phi of the ray R_gamma
    const double dev = std::abs(wrap_angle(static_cast<double>(n) * std::arg(z) - gamma));
    return dev < static_cast<double>(n) * phi * (1 - margin);
  }
  // component index m: the one centred on arg (gamma + 2 pi m)/n
  long long component(Cplx z) const {
    const double x = (static_cast<double>(n) * std::arg(z) - gamma) / kTwoPi;
    long long m = static_cast<long long>(std::llround(x));
    return ((m % n) + n) % n;
  }
  double center(long long m) const { return (gamma + kTwoPi * static_cast<double>(m)) / static_cast<double>(n); }
};

struct DartAssignment {
  bool ok = true;
  std::string message;
  DartSpec inner, outer;
  std::vector<long long> inner_component; // per root, -1 if not small
  std::vector<long long> outer_component; // per root, -1 if not large
  double eps = 0.0, phi = 0.0, r = 0.0, phi_outer = 0.0;
};

// Smallest darts (up to a relative margin) enclosing the small and the large
// roots, then a one-root-per-component check.
inline DartAssignment dart_classify(const RootScene &sc, double margin = 1e-6) {
  const auto &p = sc.params;
  DartAssignment out;
  out.inner.n = p.mu_minus;
  out.inner.gamma = wrap_positive(std::arg(ipow(p.s, p.d_minus)));
  out.outer.n = p.mu;
  out.outer.outer = true;
  // large roots: z^mu is close to 1/(c t^{d-})
  out.outer.gamma = wrap_positive(-std::arg(ipow(p.t, p.d_minus)));
  if (sc.violations) {
    out.ok = false;
    out.message = "root in the annulus 1/2 < |z| < 2";
  }
  double max_small = 0, min_large = INFINITY, dev_in = 0, dev_out = 0;
  for (std::size_t i = 0; i < sc.roots.size(); ++i) {
    const Cplx z = sc.roots[i];
    if (sc.cls[i] == RootClass::Small) {
      max_small = std::max(max_small, std::abs(z));
      dev_in = std::max(dev_in, std::abs(wrap_angle(static_cast<double>(p.mu_minus) * std::arg(z) - out.inner.gamma)) /
                                    static_cast<double>(p.mu_minus));
    } else if (sc.cls[i] == RootClass::Large) {
      min_large = std::min(min_large, std::abs(z));
      dev_out = std::max(dev_out, std::abs(wrap_angle(static_cast<double>(p.mu) * std::arg(z) - out.outer.gamma)) /
                                      static_cast<double>(p.mu));
    }
  }
  out.eps = out.inner.eps = std::max(max_small * (1 + margin), 1e-300);
  out.phi = out.inner.phi = dev_in * (1 + margin) + 1e-12;
  out.r = out.outer.eps = std::isfinite(min_large) ? min_large * (1 - margin) : 2.0;
  out.phi_outer = out.outer.phi = dev_out * (1 + margin) + 1e-12;
  if (!(out.phi < std::numbers::pi / static_cast<double>(p.mu_minus))) {
    out.ok = false;
    out.message = "small roots do not fit in a dart";
  }
  if (!(out.phi_outer < std::numbers::pi / static_cast<double>(p.mu))) {
    out.ok = false;
    out.message = "large roots do not fit in a dart";
  }
  std::vector<int> hit_in(static_cast<std::size_t>(p.mu_minus)), hit_out(static_cast<std::size_t>(p.mu));
  for (std::size_t i = 0; i < sc.roots.size(); ++i) {
    const Cplx z = sc.roots[i];
    long long ci = -1, co = -1;
    if (sc.cls[i] == RootClass::Small && out.inner.contains(z, 0.0)) {
      ci = out.inner.component(z);
      hit_in[static_cast<std::size_t>(ci)]++;
    } else if (sc.cls[i] == RootClass::Large && out.outer.contains(z, 0.0)) {
      co = out.outer.component(z);
      hit_out[static_cast<std::size_t>(co)]++;
    }
    out.inner_component.push_back(ci);
    out.outer_component.push_back(co);
  }
  const bool t_zero = p.t == Cplx(0.0);
  for (int h : hit_in)
    if (h != 1) {
      out.ok = false;
      out.message = "inner dart component without exactly one root";
    }
  if (!t_zero)
    for (int h : hit_out)
      if (h != 1) {
        out.ok = false;
        out.message = "outer dart component without exactly one root";
      }
  return out;
}

// ---- the constants c', c'', c_a -----------------------------------------

struct CaConstants {
  Rational c_prime, c_dprime, c_a;
};

// Follows the elimination along
//   s + t z1^{a1} = a2 z2^{a2-1} z3,  z_{k-1}^{a_{k-1}} = a_k z_k^{a_k-1} z_{k+1},  z_{n+1} = 1.
// Every z_k is a monomial C z2^A u^B with u = s + t z1^{a1}; closing the
// chain with z_{n+1} = 1 gives u^{mu(a3..)} = c' z2^{mu(a2..)}.
inline CaConstants c_a_constant(const ChainVector &a) {
  const std::size_t n = a.size();
  if (n < 2)
    throw std::invalid_argument("c_a needs n >= 2");
  struct Mono {
    Rational c;
    BigInt A, B;
  };
  auto mul = [](const Mono &x, const Mono &y) { return Mono{x.c * y.c, x.A + y.A, x.B + y.B}; };
  auto pw = [&](const Mono &x, const BigInt &k) {
    Mono r{Rational(1), 0, 0};
    for (BigInt i = 0; i < k; ++i)
      r = mul(r, x);
    return r;
  };
  auto inv = [](const Mono &x) { return Mono{1 / x.c, -x.A, -x.B}; };
  std::vector<Mono> z(n + 2);
  z[2] = {Rational(1), 1, 0};
  const Mono u{Rational(1), 0, 1};
  // z3 = u / (a2 z2^{a2-1})
  z[3] = mul(u, inv(mul(Mono{Rational(a[2]), 0, 0}, pw(z[2], a[2] - 1))));
  for (std::size_t k = 3; k <= n; ++k)
    z[k + 1] = mul(pw(z[k - 1], a[k - 1]), inv(mul(Mono{Rational(a[k]), 0, 0}, pw(z[k], a[k] - 1))));
  Mono close = z[n + 1]; // = 1
  // C z2^A u^B = 1  ->  u^B = (1/C) z2^{-A}
  Rational cp = 1 / close.c;
  BigInt uexp = close.B, zexp = -close.A;
  if (uexp < 0) {
    cp = 1 / cp;
    uexp = -uexp;
    zexp = -zexp;
  }
  ChainVector minus = a.tail();
  if (zexp != mu(minus) || uexp != mu(minus.tail()))
    throw std::logic_error("elimination produced unexpected exponents");
  if (cp <= 0)
    throw std::logic_error("elimination produced a non-positive constant");
  // z1 - y = c'' u z2 with c'' = 1 + sum_{k=2}^n (-1)^{k-1} / d(a2..ak)
  Rational cdp = 1;
  for (std::size_t k = 2; k <= n; ++k)
    cdp += Rational(k % 2 == 1 ? 1 : -1) / Rational(d(a.slice(2, k)));
  CaConstants out;
  out.c_prime = cp;
  out.c_dprime = cdp;
  Rational ca = 1;
  for (BigInt i = 0; i < mu(minus); ++i)
    ca *= cdp;
  out.c_a = ca / cp;
  return out;
}

inline FamilyParams chain_family(const ChainVector &a, Cplx t, Cplx s) {
  FamilyParams p;
  if (a.size() < 1)
    throw std::invalid_argument("chain family needs n >= 1");
  ChainVector m = a.tail();
  p.a = to_ll(BigInt(a[1]));
  p.mu = to_ll(mu(a));
  p.mu_minus = to_ll(mu(m));
  p.d_minus = to_ll(d(m));
  // n = 1 has no c_a; the family is still well defined with c = 1
  p.c = a.size() >= 2 ? to_double(c_a_constant(a).c_a) : 1.0;
  p.t = t;
  p.s = s;
  return p;
}

// ---- g = z1 - s z2 - t z1^{a1} z2 - p_{-a}(z2..zn) -------------------------

// p_b(w) = sum_j (-1)^j w_j^{b_j} w_{j+1}, w_{m+1} = 1
struct ChainPotentialEval {
  Cplx value;
  std::vector<Cplx> grad;
  std::vector<double> grad_scale;
  Eigen::MatrixXcd hess;
};

inline ChainPotentialEval eval_chain_potential(const std::vector<long long> &b, const std::vector<Cplx> &w) {
  const std::size_t m = b.size();
  ChainPotentialEval e;
  e.value = 0.0;
  e.grad.assign(m, 0.0);
  e.grad_scale.assign(m, 0.0);
  e.hess = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  auto next = [&](std::size_t j) { return j + 1 < m ? w[j + 1] : Cplx(1.0); };
  for (std::size_t j = 0; j < m; ++j) {
    const double sg = (j % 2 == 0) ? -1.0 : 1.0; // (-1)^{j+1} for 0-based j
    const Cplx nx = next(j);
    e.value += sg * ipow(w[j], b[j]) * nx;
    const Cplx dj = sg * static_cast<double>(b[j]) * ipow(w[j], b[j] - 1) * nx;
    e.grad[j] += dj;
    e.grad_scale[j] += std::abs(dj);
    if (j + 1 < m) {
      const Cplx dn = sg * ipow(w[j], b[j]);
      e.grad[j + 1] += dn;
      e.grad_scale[j + 1] += std::abs(dn);
      const Cplx off = sg * static_cast<double>(b[j]) * ipow(w[j], b[j] - 1);
      e.hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + 1)) += off;
      e.hess(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) += off;
    }
    if (b[j] >= 2)
      e.hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) +=
          sg * static_cast<double>(b[j] * (b[j] - 1)) * ipow(w[j], b[j] - 2) * nx;
  }
  return e;
}

inline std::vector<long long> exponents(const ChainVector &a) {
  std::vector<long long> v;
  for (std::size_t i = 1; i <= a.size(); ++i)
    v.push_back(to_ll(BigInt(a[i])));
  return v;
}

struct GEval {
  Cplx value;
  double value_scale;
  std::vector<Cplx> grad;
  std::vector<double> grad_scale;
};

inline GEval eval_g(const ChainVector &a, Cplx t, Cplx s, const std::vector<Cplx> &z) {
  const std::size_t n = a.size();
  if (n < 2 || z.size() != n)
    throw std::invalid_argument("g needs n >= 2 and a point in C^n");
  auto ex = exponents(a);
  std::vector<long long> b(ex.begin() + 1, ex.end());
  std::vector<Cplx> w(z.begin() + 1, z.end());
  auto P = eval_chain_potential(b, w);
  const long long a1 = ex[0];
  GEval g;
  const Cplx t1 = t * ipow(z[0], a1) * z[1];
  g.value = z[0] - s * z[1] - t1 - P.value;
  g.value_scale = std::abs(z[0]) + std::abs(s * z[1]) + std::abs(t1) + std::abs(P.value);
  for (std::size_t j = 0; j < b.size(); ++j)
    g.value_scale += std::abs(ipow(w[j], b[j]) * (j + 1 < b.size() ? w[j + 1] : Cplx(1.0)));
  g.grad.assign(n, 0.0);
  g.grad_scale.assign(n, 0.0);
  const Cplx d1 = static_cast<double>(a1) * t * ipow(z[0], a1 - 1) * z[1];
  g.grad[0] = 1.0 - d1;
  g.grad_scale[0] = 1.0 + std::abs(d1);
  g.grad[1] = -s - t * ipow(z[0], a1) - P.grad[0];
  g.grad_scale[1] = std::abs(s) + std::abs(t * ipow(z[0], a1)) + P.grad_scale[0];
  for (std::size_t k = 2; k < n; ++k) {
    g.grad[k] = -P.grad[k - 1];
    g.grad_scale[k] = P.grad_scale[k - 1];
  }
  return g;
}

// ---- the critical-value curve c_a (s + t z1^{a1})^{d(-a)} = (z1 - y)^{mu(-a)} -----

inline CPoly critical_curve_poly(const ChainVector &a, Cplx t, Cplx s, Cplx y) {
  const auto P = chain_family(a, t, s);
  CPoly lhs = poly_pow(binomial_base(s, t, P.a), P.d_minus);
  for (auto &x : lhs)
    x *= P.c;
  return poly_sub(lhs, poly_pow(CPoly{-y, 1.0}, P.mu_minus));
}

// the same curve in the offset w = z1 - y; small roots sit close to y, so
// solving for w avoids the cancellation in z1 - y
inline CPoly critical_curve_offset_poly(const ChainVector &a, Cplx t, Cplx s, Cplx y) {
  const auto P = chain_family(a, t, s);
  CPoly u = poly_pow(CPoly{y, 1.0}, P.a);
  for (auto &x : u)
    x *= t;
  u[0] += s;
  CPoly lhs = poly_pow(u, P.d_minus);
  for (auto &x : lhs)
    x *= P.c;
  CPoly wm(static_cast<std::size_t>(P.mu_minus) + 1, 0.0);
  wm.back() = 1.0;
  return poly_sub(lhs, wm);
}

inline std::vector<Cplx> critical_curve_offsets(const ChainVector &a, Cplx t, Cplx s, Cplx y) {
  return poly_roots(critical_curve_offset_poly(a, t, s, y));
}

inline std::vector<Cplx> critical_curve_roots(const ChainVector &a, Cplx t, Cplx s, Cplx y) {
  auto w = critical_curve_offsets(a, t, s, y);
  for (auto &x : w)
    x += y;
  return w;
}

struct Lift {
  std::vector<Cplx> z;
  double g_residual = 0.0;        // |g(z) - y| relative to the term sizes
  double lagrange_residual = 0.0; // max_k>=2 |d_k g| relative, i.e. dz1 = lambda dg
  Cplx lambda = 0.0;
  Cplx hessian_det = 0.0;
  Cplx hessian_ratio = 0.0; // det / ((-1)^{C(m+1,2)} z2^{a2-2} z3^{a3-1} ... zn^{an-1}), expected > 0
  double hessian_scaled = 0.0;
  bool hessian_ok = false;
  double polish_shift = 0.0; // |change of z1| / |z1| from the Newton polish; large means a wrong curve
};

// residual vector (g - y, d2 g, ..., dn g), each relative to its term sizes
inline double lift_residual(const GEval &g, Cplx y, double *g_part = nullptr) {
  const double gr = std::abs(g.value - y) / std::max(g.value_scale + std::abs(y), 1e-300);
  double lr = 0.0;
  for (std::size_t k = 1; k < g.grad.size(); ++k)
    lr = std::max(lr, std::abs(g.grad[k]) / std::max(g.grad_scale[k], 1e-300));
  if (g_part)
    *g_part = gr;
  return std::max(gr, lr);
}

// Newton on (g - y, d2 g, ..., dn g) = 0 in C^n; a step is kept only when it
// lowers the relative residual
inline void polish_lift(const ChainVector &a, Cplx t, Cplx s, Cplx y, std::vector<Cplx> &z) {
  const std::size_t n = a.size();
  auto ex = exponents(a);
  std::vector<long long> b(ex.begin() + 1, ex.end());
  for (int it = 0; it < 4; ++it) {
    auto g = eval_g(a, t, s, z);
    const double before = lift_residual(g, y);
    std::vector<Cplx> w(z.begin() + 1, z.end());
    auto P = eval_chain_potential(b, w);
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXcd F(static_cast<Eigen::Index>(n));
    F[0] = g.value - y;
    for (std::size_t k = 0; k < n; ++k)
      J(0, static_cast<Eigen::Index>(k)) = g.grad[k];
    // rows d_k g, k >= 2 (0-based k >= 1)
    const long long a1 = ex[0];
    for (std::size_t k = 1; k < n; ++k) {
      F[static_cast<Eigen::Index>(k)] = g.grad[k];
      for (std::size_t l = 1; l < n; ++l)
        J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
            -P.hess(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(l - 1));
    }
    J(1, 0) = -static_cast<double>(a1) * t * ipow(z[0], a1 - 1);
    Eigen::VectorXcd step = J.fullPivLu().solve(F);
    std::vector<Cplx> next = z;
    for (std::size_t k = 0; k < n; ++k)
      next[k] -= step[static_cast<Eigen::Index>(k)];
    if (!(lift_residual(eval_g(a, t, s, next), y) < before))
      break;
    z = next;
  }
}

// lift of the curve point (y, y + w)
inline Lift lift_from_offset(const ChainVector &a, Cplx t, Cplx s, Cplx w_off, Cplx y) {
  const Cplx z1 = y + w_off;
  const std::size_t n = a.size();
  if (n < 2)
    throw std::invalid_argument("lifting needs n >= 2");
  auto ex = exponents(a);
  const Cplx u = s + t * ipow(z1, ex[0]);
  const double uscale = std::abs(s) + std::abs(t * ipow(z1, ex[0]));
  if (std::abs(u) <= 1e-14 * std::max(uscale, 1e-300))
    throw std::domain_error("point lies on the excluded locus s + t z1^a1 = 0");
  const double cdp = to_double(c_a_constant(a).c_dprime);
  Lift L;
  L.z.assign(n, 0.0);
  L.z[0] = z1;
  L.z[1] = w_off / (cdp * u);
  if (n >= 3)
    L.z[2] = u / (static_cast<double>(ex[1]) * ipow(L.z[1], ex[1] - 1));
  for (std::size_t j = 3; j < n; ++j) // 0-based z[j] from z[j-2], z[j-1]
    L.z[j] = ipow(L.z[j - 2], ex[j - 2]) / (static_cast<double>(ex[j - 1]) * ipow(L.z[j - 1], ex[j - 1] - 1));
  polish_lift(a, t, s, y, L.z);
  L.polish_shift = std::abs(L.z[0] - z1) / std::max(std::abs(z1), 1e-300);
  auto g = eval_g(a, t, s, L.z);
  L.g_residual = std::abs(g.value - y) / std::max(g.value_scale + std::abs(y), 1e-300);
  L.lambda = 1.0 / g.grad[0];
  for (std::size_t k = 1; k < n; ++k)
    L.lagrange_residual = std::max(L.lagrange_residual, std::abs(g.grad[k]) / std::max(g.grad_scale[k], 1e-300));
  // Hessian of p_{-a} in z2..zn
  std::vector<long long> b(ex.begin() + 1, ex.end());
  std::vector<Cplx> w(L.z.begin() + 1, L.z.end());
  auto P = eval_chain_potential(b, w);
  L.hessian_det = P.hess.determinant();
  const std::size_t m = b.size();
  Cplx mono = ((m * (m + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  mono *= ipow(w[0], b[0] - 2);
  for (std::size_t j = 1; j < m; ++j)
    mono *= ipow(w[j], b[j] - 1);
  L.hessian_ratio = L.hessian_det / mono;
  // scale-free size of the determinant: divide by the product of row norms
  double rows = 1.0;
  for (Eigen::Index i = 0; i < P.hess.rows(); ++i)
    rows *= std::max(P.hess.row(i).norm(), 1e-300);
  L.hessian_scaled = std::abs(L.hessian_det) / rows;
  L.hessian_ok = L.hessian_scaled > 1e-8 && L.hessian_ratio.real() > 0 &&
                 std::abs(L.hessian_ratio.imag()) <= 1e-6 * std::abs(L.hessian_ratio);
  return L;
}

inline Lift lift_critical_point(const ChainVector &a, Cplx t, Cplx s, Cplx z1, Cplx y) {
  return lift_from_offset(a, t, s, z1 - y, y);
}

// ---- critical points of g ----------------------------------------------

struct GCritical {
  std::vector<Cplx> z;
  Cplx value;
  double grad_residual = 0.0; // max_k |d_k g| relative, all k
};

// d1 g = 0 gives z2 = 1/(a1 t z1^{a1-1}); with the chain equations
//   c_a (a1 t)^{mu-} z1^{(a1-1) mu-} u^{mu--} = c''^{mu-},
// a polynomial of degree mu(a) in z1. Each root is lifted and its full
// gradient is checked.
inline std::vector<GCritical> g_critical_points(const ChainVector &a, Cplx t, Cplx s) {
  if (a.size() < 2)
    throw std::invalid_argument("critical points of g need n >= 2");
  if (t == Cplx(0.0))
    throw std::invalid_argument("critical points of g need t != 0");
  const auto K = c_a_constant(a);
  const auto P = chain_family(a, t, s);
  const long long mmm = to_ll(mu(a.tail().tail()));
  const double cdp = to_double(K.c_dprime);
  CPoly poly = poly_pow(binomial_base(s, t, P.a), mmm);
  CPoly shift(static_cast<std::size_t>((P.a - 1) * P.mu_minus) + 1, 0.0);
  shift.back() = P.c * ipow(static_cast<double>(P.a) * t, P.mu_minus);
  poly = poly_mul(poly, shift);
  poly[0] -= std::pow(cdp, static_cast<double>(P.mu_minus));
  std::vector<GCritical> out;
  for (Cplx z1 : poly_roots(poly)) {
    const Cplx u = s + t * ipow(z1, P.a);
    const Cplx y = z1 - cdp * u / (static_cast<double>(P.a) * t * ipow(z1, P.a - 1));
    auto L = lift_critical_point(a, t, s, z1, y);
    auto g = eval_g(a, t, s, L.z);
    GCritical c{L.z, g.value, 0.0};
    for (std::size_t k = 0; k < g.grad.size(); ++k)
      c.grad_residual = std::max(c.grad_residual, std::abs(g.grad[k]) / std::max(g.grad_scale[k], 1e-300));
    out.push_back(std::move(c));
  }
  return out;
}

// ---- equivariance under s -> e^{i theta} s, theta = 2 pi a1 / mu(a) ---------

inline double multiset_deviation(std::vector<Cplx> x, std::vector<Cplx> y) {
  if (x.size() != y.size())
    return INFINITY;
  double worst = 0.0, scale = 1e-300;
  for (auto &v : x)
    scale = std::max(scale, std::abs(v));
  std::vector<bool> used(y.size(), false);
  for (auto &v : x) {
    std::size_t best = y.size();
    double bd = INFINITY;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!used[j] && std::abs(v - y[j]) < bd) {
        bd = std::abs(v - y[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst / scale;
}

struct EquivarianceReport {
  double family_deviation = 0.0;  // roots of the critical curve at y = 0
  double values_deviation = 0.0;  // critical values of g (n >= 2)
  double loop_deviation = 0.0;    // mu(a) steps back to the start
  double max() const { return std::max({family_deviation, values_deviation, loop_deviation}); }
};

inline EquivarianceReport equivariance_check(const ChainVector &a, Cplx t, Cplx s) {
  const auto P = chain_family(a, t, s);
  const double mu_d = static_cast<double>(P.mu);
  const Cplx rot = std::polar(1.0, kTwoPi / mu_d);
  const Cplx spin = std::polar(1.0, kTwoPi * static_cast<double>(P.a) / mu_d);
  auto roots = [&](Cplx ss) {
    auto q = P;
    q.s = ss;
    return solve_family(q).roots;
  };
  EquivarianceReport r;
  auto base = roots(s);
  auto rotated = base;
  for (auto &z : rotated)
    z *= rot;
  r.family_deviation = multiset_deviation(rotated, roots(spin * s));
  Cplx ss = s;
  for (long long k = 0; k < P.mu; ++k)
    ss *= spin;
  r.loop_deviation = multiset_deviation(base, roots(ss));
  if (a.size() >= 2 && t != Cplx(0.0)) {
    auto vals = [&](Cplx sv) {
      std::vector<Cplx> v;
      for (auto &c : g_critical_points(a, t, sv))
        v.push_back(c.value);
      return v;
    };
    auto v0 = vals(s);
    for (auto &z : v0)
      z *= rot;
    r.values_deviation = multiset_deviation(v0, vals(spin * s));
  }
  return r;
}

// ---- merge of the two positive real roots along y ------------------------

inline bool is_real_root(Cplx z, double tol = 1e-6) { return std::abs(z.imag()) <= tol * std::abs(z); }

inline std::vector<double> positive_real_roots_above(const std::vector<Cplx> &roots, double y, double tol = 1e-6) {
  std::vector<double> out;
  for (auto &z : roots)
    if (is_real_root(z, tol) && z.real() > 0 && z.real() > y)
      out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

struct MergeReport {
  ChainVector a;
  double t = 0, s = 0;
  std::size_t positive_at_zero = 0;
  double b1 = 0, b2 = 0;          // the two positive real roots at y = 0
  double y_merge = 0;             // bisection on the root count
  double y_discriminant = 0;      // Newton on F = dF/dz1 = 0
  double z_discriminant = 0;
  double g_value = NAN;           // positive real critical value of g
  std::size_t g_positive_count = 0;
  double g_grad_residual = 0;
  double rel_merge_vs_discriminant = INFINITY;
  double rel_discriminant_vs_g = INFINITY;
  bool ok = false;
  std::string message;
};

inline MergeReport merge_report(const ChainVector &a, double t = 1e-3, double s = 1e-3, double tol = 1e-6) {
  MergeReport r;
  r.a = a;
  r.t = t;
  r.s = s;
  auto roots_at = [&](double y) { return critical_curve_roots(a, t, s, y); };
  auto pos0 = positive_real_roots_above(roots_at(0.0), 0.0);
  r.positive_at_zero = pos0.size();
  if (pos0.size() != 2) {
    r.message = "expected two positive real roots at y = 0";
    return r;
  }
  r.b1 = pos0[0];
  r.b2 = pos0[1];
  auto two_above = [&](double y) { return positive_real_roots_above(roots_at(y), y).size() >= 2; };
  double lo = 0.0, hi = std::max(1.0, r.b2);
  while (two_above(hi) && hi < 1e15)
    hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (two_above(mid) ? lo : hi) = mid;
  }
  r.y_merge = lo;
  auto pos = positive_real_roots_above(roots_at(lo), lo);
  double z = pos.size() >= 2 ? 0.5 * (pos[pos.size() - 2] + pos[pos.size() - 1]) : lo;
  if (pos.size() >= 2) { // the merging pair is the closest one
    double best = INFINITY;
    for (std::size_t i = 0; i + 1 < pos.size(); ++i)
      if (pos[i + 1] - pos[i] < best) {
        best = pos[i + 1] - pos[i];
        z = 0.5 * (pos[i] + pos[i + 1]);
      }
  }
  // Newton on F(y, z) = c_a u^{d-} - (z - y)^{mu-}, G = dF/dz
  const auto P = chain_family(a, t, s);
  const double ca = P.c;
  const long long A1 = P.a, dm = P.d_minus, mm = P.mu_minus;
  double y = lo;
  auto powr = [](double x, long long k) { return k < 0 ? 0.0 : std::pow(x, static_cast<double>(k)); };
  for (int it = 0; it < 100; ++it) {
    const double u = s + t * powr(z, A1);
    const double du = static_cast<double>(A1) * t * powr(z, A1 - 1);
    const double ddu = static_cast<double>(A1 * (A1 - 1)) * t * powr(z, A1 - 2);
    const double w = z - y;
    const double F = ca * powr(u, dm) - powr(w, mm);
    const double G = ca * static_cast<double>(dm) * powr(u, dm - 1) * du - static_cast<double>(mm) * powr(w, mm - 1);
    const double Fy = static_cast<double>(mm) * powr(w, mm - 1);
    const double Fz = G;
    const double Gy = static_cast<double>(mm * (mm - 1)) * powr(w, mm - 2);
    const double Gz = ca * static_cast<double>(dm) *
                          (static_cast<double>(dm - 1) * powr(u, dm - 2) * du * du + powr(u, dm - 1) * ddu) -
                      static_cast<double>(mm * (mm - 1)) * powr(w, mm - 2);
    const double det = Fy * Gz - Fz * Gy;
    if (det == 0)
      break;
    const double dy = (F * Gz - Fz * G) / det;
    const double dz = (Fy * G - F * Gy) / det;
    y -= dy;
    z -= dz;
    if (std::abs(dy) <= 1e-15 * std::abs(y) && std::abs(dz) <= 1e-15 * std::abs(z))
      break;
  }
  r.y_discriminant = y;
  r.z_discriminant = z;
  r.rel_merge_vs_discriminant = std::abs(r.y_merge - y) / std::abs(y);
  // the critical values of g, each checked by its full gradient
  for (auto &c : g_critical_points(a, t, s)) {
    r.g_grad_residual = std::max(r.g_grad_residual, c.grad_residual);
    if (is_real_root(c.value, 1e-9) && c.value.real() > 0) {
      ++r.g_positive_count;
      r.g_value = c.value.real();
    }
  }
  if (r.g_positive_count == 1)
    r.rel_discriminant_vs_g = std::abs(y - r.g_value) / std::abs(r.g_value);
  r.ok = r.g_positive_count == 1 && r.rel_merge_vs_discriminant < tol && r.rel_discriminant_vs_g < tol &&
         r.g_grad_residual < 1e-8;
  if (!r.ok)
    r.message = r.g_positive_count != 1 ? "g does not have a unique positive real critical value"
                                        : "merge point and critical value disagree";
  return r;
}

// ---- coiled matching paths ----------------------------------------------

// angle offset of the coil: -2 pi/mu(-a) near rho = 1/2, 2 pi/mu(a) near rho = 2
inline double coil_offset(double rho, long long mu_a, long long mu_minus) {
  const double lo = -kTwoPi / static_cast<double>(mu_minus), hi = kTwoPi / static_cast<double>(mu_a);
  double x = std::clamp((rho - 0.6) / (1.9 - 0.6), 0.0, 1.0);
  return lo + (hi - lo) * x * x * (3 - 2 * x);
}

struct PathPlan {
  long long k = 0;
  std::vector<Cplx> points;
  Cplx start, end;                  // small and large critical value
  long long inner_index = 0;        // component C_0(-2 pi k / mu(-a)), index mod mu(-a)
  long long outer_index = 0;        // component C_inf(2 pi k / mu(a)), index mod mu(a)
  double margin = 0.0;              // min distance from the interior to other critical values
};

inline double segment_distance(Cplx p, Cplx a, Cplx b) {
  const Cplx ab = b - a;
  const double L2 = std::norm(ab);
  if (L2 == 0)
    return std::abs(p - a);
  const double u = std::clamp(((p - a) * std::conj(ab)).real() / L2, 0.0, 1.0);
  return std::abs(p - (a + u * ab));
}

inline void append_arc(std::vector<Cplx> &pts, double radius, double from, double to, int steps = 24) {
  const double delta = wrap_angle(to - from);
  for (int i = 1; i <= steps; ++i)
    pts.push_back(std::polar(radius, from + delta * i / steps));
}

inline PathPlan coil_path(const ChainVector &a, long long k, double t, double s0 = 1e-3) {
  if (a.size() < 2)
    throw std::invalid_argument("coil paths need n >= 2");
  const auto P = chain_family(a, t, s0);
  if (k < 0)
    throw std::invalid_argument("coil index must be non-negative");
  if (!(t > 0))
    throw std::invalid_argument("coil paths need t > 0");
  auto scene = solve_family(P);
  auto darts = dart_classify(scene);
  if (!darts.ok)
    throw std::runtime_error("dart classification failed: " + darts.message);
  PathPlan pl;
  pl.k = k;
  pl.inner_index = ((-k) % P.mu_minus + P.mu_minus) % P.mu_minus;
  pl.outer_index = k % P.mu;
  std::optional<Cplx> small, large;
  for (std::size_t i = 0; i < scene.roots.size(); ++i) {
    if (darts.inner_component[i] == pl.inner_index)
      small = scene.roots[i];
    if (darts.outer_component[i] == pl.outer_index)
      large = scene.roots[i];
  }
  if (!small || !large)
    throw std::runtime_error("endpoint not found in the expected dart component");
  pl.start = *small;
  pl.end = *large;
  const double th_in = darts.inner.center(pl.inner_index);
  const double th_out = darts.outer.center(pl.outer_index);
  // small root -> arc at its radius -> radial out to 1/2
  pl.points.push_back(*small);
  append_arc(pl.points, std::abs(*small), std::arg(*small), th_in, 8);
  pl.points.push_back(std::polar(0.5, th_in));
  // the k-fold coil of [1/2, 2]
  const int N = 200;
  for (int i = 1; i < N; ++i) {
    const double rho = 0.5 + 1.5 * i / N;
    const double th = static_cast<double>(k) * coil_offset(rho, P.mu, P.mu_minus);
    pl.points.push_back(std::polar(rho, th));
  }
  pl.points.push_back(std::polar(2.0, th_out));
  // radial out to the large root's radius, arc to it
  pl.points.push_back(std::polar(std::abs(*large), th_out));
  append_arc(pl.points, std::abs(*large), th_out, std::arg(*large), 8);
  pl.points.back() = *large;
  pl.margin = INFINITY;
  for (std::size_t i = 0; i < scene.roots.size(); ++i) {
    const Cplx c = scene.roots[i];
    if (c == *small || c == *large)
      continue;
    for (std::size_t j = 0; j + 1 < pl.points.size(); ++j)
      pl.margin = std::min(pl.margin, segment_distance(c, pl.points[j], pl.points[j + 1]));
  }
  return pl;
}

inline std::vector<PathPlan> coil_paths(const ChainVector &a, double t, double s0 = 1e-3) {
  std::vector<PathPlan> out;
  const long long m = to_ll(mu(a));
  for (long long k = 0; k < m; ++k)
    out.push_back(coil_path(a, k, t, s0));
  return out;
}

} // namespace chaincat
