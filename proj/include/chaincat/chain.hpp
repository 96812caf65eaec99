#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaincat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ChainVector {
public:
  ChainVector() = default;
  explicit ChainVector(std::vector<int> entries) : a_(std::move(entries)) {
    for (int x : a_)
      if (x < 2)
        throw std::invalid_argument("chain entries must be >= 2");
  }
  ChainVector(std::initializer_list<int> il) : ChainVector(std::vector<int>(il)) {}

  std::size_t size() const { return a_.size(); }
  bool empty() const { return a_.empty(); }
  // 1-based access, matching a_1..a_n
  int operator[](std::size_t i) const { return a_.at(i - 1); }
  const std::vector<int> &entries() const { return a_; }

  ChainVector reversed() const {
    std::vector<int> r(a_.rbegin(), a_.rend());
    return ChainVector(std::move(r));
  }
  // drop first entry
  ChainVector tail() const {
    if (a_.empty())
      throw std::invalid_argument("tail of empty chain");
    return ChainVector(std::vector<int>(a_.begin() + 1, a_.end()));
  }
  // drop last entry
  ChainVector init() const {
    if (a_.empty())
      throw std::invalid_argument("init of empty chain");
    return ChainVector(std::vector<int>(a_.begin(), a_.end() - 1));
  }
  // entries a_i..a_j inclusive, 1-based; empty when j < i
  ChainVector slice(std::size_t i, std::size_t j) const {
    if (j < i)
      return {};
    return ChainVector(std::vector<int>(a_.begin() + (i - 1), a_.begin() + j));
  }

  std::string str() const {
    if (a_.empty())
      return "empty";
    std::string s;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i)
        s += ',';
      s += std::to_string(a_[i]);
    }
    return s;
  }

  friend bool operator==(const ChainVector &, const ChainVector &) = default;

private:
  std::vector<int> a_;
};

// Accepts "2,3,2", "(2,3,2)", "empty" or "" for the empty chain.
inline ChainVector parse_chain(const std::string &text) {
  std::string s;
  for (char c : text)
    if (c != '(' && c != ')' && c != ' ')
      s += c;
  if (s.empty() || s == "empty" || s == "∅")
    return {};
  std::vector<int> v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos)
      comma = s.size();
    std::string tok = s.substr(pos, comma - pos);
    if (tok.empty())
      throw std::invalid_argument("malformed chain vector: " + text);
    std::size_t used = 0;
    int x = std::stoi(tok, &used);
    if (used != tok.size())
      throw std::invalid_argument("malformed chain vector: " + text);
    v.push_back(x);
    pos = comma + 1;
  }
  return ChainVector(std::move(v));
}

inline BigInt d(const ChainVector &a) {
  BigInt r = 1;
  for (int x : a.entries())
    r *= x;
  return r;
}

inline BigInt mu(const ChainVector &a) {
  // unrolled from the back: mu(a_k..a_n) = d(a_k..a_n) - mu(a_{k+1}..a_n)
  BigInt m = 1, suffix = 1;
  for (std::size_t k = a.size(); k >= 1; --k) {
    suffix *= a[k];
    m = suffix - m;
  }
  return m;
}

inline BigInt mu_vee(const ChainVector &a) { return mu(a.reversed()); }

inline BigInt alpha(const ChainVector &a, int k) {
  if (k < -1 || k > static_cast<int>(a.size()))
    throw std::out_of_range("alpha index out of range");
  BigInt prev2 = 0, prev1 = 1; // alpha_{-1}, alpha_0
  if (k == -1)
    return prev2;
  BigInt prefix = 1;
  for (int j = 1; j <= k; ++j) {
    prefix *= a[j];
    BigInt cur = prefix + prev2;
    prev2 = prev1;
    prev1 = cur;
  }
  return prev1;
}

inline BigInt serre_m(const ChainVector &a) {
  const std::size_t n = a.size();
  BigInt m = (n % 2 == 0 ? BigInt(1) : BigInt(-1)) * mu_vee(a) - 1;
  for (std::size_t k = 1; k <= n; ++k) {
    BigInt term = mu(a.slice(1, k));
    m += (k % 2 == 1) ? term : BigInt(-term);
  }
  return m;
}

inline BigInt serre_D(const ChainVector &a) {
  if (a.empty())
    throw std::invalid_argument("serre_D needs n >= 1");
  return BigInt(a.size()) + 2 * serre_m(a.init());
}

inline std::vector<Rational> canonical_weights(const ChainVector &a) {
  if (a.empty())
    throw std::invalid_argument("canonical_weights needs n >= 1");
  std::vector<Rational> w;
  for (std::size_t k = 1; k <= a.size(); ++k)
    w.emplace_back(mu(a.slice(k + 1, a.size())), d(a.slice(k, a.size())));
  return w;
}

inline std::vector<BigInt> q_weights(const ChainVector &a) {
  if (a.empty())
    throw std::invalid_argument("q_weights needs n >= 1");
  std::vector<BigInt> q;
  for (std::size_t i = 1; i <= a.size(); ++i)
    q.push_back(mu(a.slice(i + 1, a.size())) * d(a.slice(1, i - 1)));
  return q;
}

inline BigInt winding_sum(const ChainVector &a) {
  if (a.empty())
    throw std::invalid_argument("winding_sum needs n >= 1");
  BigInt s = 0, prefix = 1;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    s += (k % 2 == 1) ? prefix : BigInt(-prefix);
    prefix *= a[k];
  }
  return s;
}

// All chains of length n with entries in [lo, hi], lexicographic.
inline std::vector<ChainVector> chain_grid(std::size_t n, int lo, int hi) {
  std::vector<ChainVector> out;
  std::vector<int> cur(n, lo);
  while (true) {
    out.emplace_back(cur);
    std::size_t i = 0;
    while (i < n && cur[n - 1 - i] == hi) {
      cur[n - 1 - i] = lo;
      ++i;
    }
    if (i == n)
      break;
    ++cur[n - 1 - i];
  }
  return out;
}

} // namespace chaincat
