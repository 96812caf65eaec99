#pragma once

#include "chaincat/chain.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaincat {

// Dense exact-integer matrix. Inner loops skip zero entries because the
// matrices met here are mostly sparse bands.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : r_(r), c_(c), v_(r * c) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    v_.reserve(r_ * c_);
    for (auto &row : rows) {
      if (row.size() != c_)
        throw std::invalid_argument("ragged matrix literal");
      for (long long x : row)
        v_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }
  // J with ones on the anti-diagonal
  static IntMatrix exchange(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, n - 1 - i) = 1;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  BigInt &operator()(std::size_t i, std::size_t j) { return v_[i * c_ + j]; }
  const BigInt &operator()(std::size_t i, std::size_t j) const { return v_[i * c_ + j]; }

  IntMatrix transpose() const {
    IntMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
    if (a.c_ != b.r_)
      throw std::invalid_argument("matrix shape mismatch in product");
    IntMatrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const BigInt &x = a(i, k);
        if (x.is_zero())
          continue;
        for (std::size_t j = 0; j < b.c_; ++j) {
          const BigInt &y = b(k, j);
          if (!y.is_zero())
            m(i, j) += x * y;
        }
      }
    return m;
  }

  std::vector<BigInt> apply(const std::vector<BigInt> &x) const {
    if (x.size() != c_)
      throw std::invalid_argument("vector length mismatch");
    std::vector<BigInt> y(r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j)
        if (!x[j].is_zero() && !(*this)(i, j).is_zero())
          y[i] += (*this)(i, j) * x[j];
    return y;
  }

  bool is_upper_unitriangular() const {
    if (r_ != c_)
      return false;
    for (std::size_t i = 0; i < r_; ++i) {
      if ((*this)(i, i) != 1)
        return false;
      for (std::size_t j = 0; j < i; ++j)
        if (!(*this)(i, j).is_zero())
          return false;
    }
    return true;
  }

  // Exact inverse of an upper unitriangular matrix (back substitution).
  IntMatrix unitriangular_inverse() const {
    if (!is_upper_unitriangular())
      throw std::invalid_argument("matrix is not upper unitriangular");
    const std::size_t n = r_;
    IntMatrix x = identity(n);
    for (std::size_t ii = n; ii-- > 0;) {
      // row ii of X:  X_ii = e_ii - sum_{k>ii} G_{ii,k} X_k
      for (std::size_t k = ii + 1; k < n; ++k) {
        const BigInt &g = (*this)(ii, k);
        if (g.is_zero())
          continue;
        for (std::size_t j = k; j < n; ++j)
          if (!x(k, j).is_zero())
            x(ii, j) -= g * x(k, j);
      }
    }
    return x;
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < r_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < c_; ++j)
        os << (j ? "," : "") << (*this)(i, j);
      os << ']';
    }
    os << ']';
    return os.str();
  }

  friend bool operator==(const IntMatrix &, const IntMatrix &) = default;

private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<BigInt> v_;
};

// Rank over Q by fraction-free (Bareiss) elimination.
inline std::size_t rank_over_Q(IntMatrix m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t col = 0; col < C && rank < R; ++col) {
    std::size_t p = rank;
    while (p < R && m(p, col).is_zero())
      ++p;
    if (p == R)
      continue;
    if (p != rank)
      for (std::size_t j = 0; j < C; ++j)
        std::swap(m(p, j), m(rank, j));
    for (std::size_t i = rank + 1; i < R; ++i) {
      for (std::size_t j = col + 1; j < C; ++j)
        m(i, j) = (m(i, j) * m(rank, col) - m(i, col) * m(rank, j)) / prev;
      m(i, col) = 0;
    }
    prev = m(rank, col);
    ++rank;
  }
  return rank;
}

} // namespace chaincat
