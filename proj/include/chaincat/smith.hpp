#pragma once

#include "chaincat/matrix.hpp"

#include <optional>

namespace chaincat {

// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_i >= 0.
struct SmithForm {
  IntMatrix U, V, D;
  std::size_t rank = 0;
  BigInt diag(std::size_t i) const { return i < D.rows() && i < D.cols() ? D(i, i) : BigInt(0); }
};

namespace detail {

inline void swap_rows(IntMatrix &m, std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    std::swap(m(a, j), m(b, j));
}
inline void swap_cols(IntMatrix &m, std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    std::swap(m(i, a), m(i, b));
}
// row_a += k * row_b
inline void add_row(IntMatrix &m, std::size_t a, std::size_t b, const BigInt &k) {
  if (k.is_zero())
    return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!m(b, j).is_zero())
      m(a, j) += k * m(b, j);
}
inline void add_col(IntMatrix &m, std::size_t a, std::size_t b, const BigInt &k) {
  if (k.is_zero())
    return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m(i, b).is_zero())
      m(i, a) += k * m(i, b);
}
inline void negate_row(IntMatrix &m, std::size_t a) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    m(a, j) = -m(a, j);
}

} // namespace detail

inline SmithForm smith_normal_form(const IntMatrix &A) {
  using namespace detail;
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm s{IntMatrix::identity(m), IntMatrix::identity(n), A, 0};
  IntMatrix &D = s.D;
  std::size_t t = 0;
  while (t < m && t < n) {
    // pivot: smallest nonzero absolute value in the remaining block
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    BigInt best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (!D(i, j).is_zero()) {
          BigInt v = abs(D(i, j));
          if (!piv || v < best) {
            best = v;
            piv = {i, j};
          }
        }
    if (!piv)
      break;
    swap_rows(D, t, piv->first);
    swap_rows(s.U, t, piv->first);
    swap_cols(D, t, piv->second);
    swap_cols(s.V, t, piv->second);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t).is_zero())
          continue;
        BigInt q = D(i, t) / D(t, t);
        add_row(D, i, t, -q);
        add_row(s.U, i, t, -q);
        if (!D(i, t).is_zero()) {
          swap_rows(D, t, i);
          swap_rows(s.U, t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j).is_zero())
          continue;
        BigInt q = D(t, j) / D(t, t);
        add_col(D, j, t, -q);
        add_col(s.V, j, t, -q);
        if (!D(t, j).is_zero()) {
          swap_cols(D, t, j);
          swap_cols(s.V, t, j);
          clean = false;
        }
      }
      if (clean) {
        // divisibility: fold any entry not divisible by the pivot into row t
        for (std::size_t i = t + 1; i < m && clean; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (!D(i, j).is_zero() && D(i, j) % D(t, t) != 0) {
              add_row(D, t, i, BigInt(1));
              add_row(s.U, t, i, BigInt(1));
              clean = false;
              break;
            }
      }
    }
    if (D(t, t) < 0) {
      negate_row(D, t);
      negate_row(s.U, t);
    }
    ++t;
  }
  s.rank = t;
  return s;
}

// Integer solutions of z * M = x (row vectors). Returns one solution plus a
// basis of the left kernel {z : z M = 0}; nullopt when no integer solution.
struct IntegerSolution {
  std::vector<BigInt> particular;
  std::vector<std::vector<BigInt>> kernel;
};

inline std::optional<IntegerSolution> solve_left(const IntMatrix &M, const std::vector<BigInt> &x,
                                                 const SmithForm &s) {
  if (x.size() != M.cols())
    throw std::invalid_argument("solve_left: length mismatch");
  // z M = x  <=>  (z U^{-1}) D = x V
  std::vector<BigInt> xv(M.cols());
  for (std::size_t j = 0; j < M.cols(); ++j)
    for (std::size_t k = 0; k < M.cols(); ++k)
      if (!x[k].is_zero() && !s.V(k, j).is_zero())
        xv[j] += x[k] * s.V(k, j);
  std::vector<BigInt> w(M.rows());
  for (std::size_t j = 0; j < M.cols(); ++j) {
    BigInt dj = s.diag(j);
    if (j < s.rank) {
      if (xv[j] % dj != 0)
        return std::nullopt;
      w[j] = xv[j] / dj;
    } else if (!xv[j].is_zero()) {
      return std::nullopt;
    }
  }
  IntegerSolution sol;
  sol.particular.assign(M.rows(), BigInt(0));
  for (std::size_t i = 0; i < M.rows(); ++i)
    if (!w[i].is_zero())
      for (std::size_t k = 0; k < M.rows(); ++k)
        sol.particular[k] += w[i] * s.U(i, k);
  for (std::size_t i = s.rank; i < M.rows(); ++i) {
    std::vector<BigInt> row(M.rows());
    for (std::size_t k = 0; k < M.rows(); ++k)
      row[k] = s.U(i, k);
    sol.kernel.push_back(std::move(row));
  }
  return sol;
}

} // namespace chaincat
