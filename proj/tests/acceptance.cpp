// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "chaincat/checks.hpp"
#include "chaincat/sweep.hpp"

#include <chrono>
#include <iostream>
#include <sstream>

using namespace chaincat;

namespace {

std::vector<ChainVector> grid(std::size_t nlo, std::size_t nhi, int hi) {
  std::vector<ChainVector> out;
  for (std::size_t n = nlo; n <= nhi; ++n)
    for (auto &a : chain_grid(n, 2, hi))
      out.push_back(a);
  return out;
}

std::vector<ChainVector> join(std::vector<ChainVector> a, const std::vector<ChainVector> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Runs a check over cases; reports the count and the first few failures.
template <class F> Outcome over(const std::vector<ChainVector> &cases, F check) {
  auto results = parallel_map(cases, [&](const ChainVector &a) {
    try {
      return check(a);
    } catch (const std::exception &e) {
      CheckResult r{"error"};
      r.require(false, e.what());
      return r;
    }
  });
  Outcome o;
  std::size_t bad = 0;
  std::ostringstream msg;
  for (std::size_t i = 0; i < cases.size(); ++i)
    if (results[i].status != Status::Pass) {
      o.pass = false;
      if (bad++ < 3)
        msg << " [" << cases[i].str() << ": " << (results[i].failures.empty() ? "?" : results[i].failures[0]) << "]";
    }
  o.detail = std::to_string(cases.size() - bad) + "/" + std::to_string(cases.size()) + " cases" + msg.str();
  return o;
}

void report(int id, const std::string &name, const Outcome &o, double seconds) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail << " (" << std::fixed
            << std::setprecision(2) << seconds << " s)" << std::endl;
}

template <class F> bool criterion(int id, const std::string &name, F body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return o.pass;
}

const std::vector<ChainVector> kMergeCases{ChainVector({2, 2}), ChainVector({2, 3}), ChainVector({3, 2}),
                                           ChainVector({2, 2, 2})};

} // namespace

int main() {
  bool all = true;
  // stated grid (n <= 4, a_i <= 4; n = 5, a_i <= 3) and its n = 5, a_i <= 4 extension
  const auto rec_stated = join(grid(1, 4, 4), grid(5, 5, 3));
  const auto rec_wide = join(grid(1, 4, 4), grid(5, 5, 4));

  all &= criterion(1, "recursion up to shifts", [&] {
    auto t0 = std::chrono::steady_clock::now();
    Outcome a = over(rec_stated, check_recursion);
    Outcome b = over(grid(5, 5, 4), check_recursion);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::size_t total = rec_wide.size();
    Outcome o{a.pass && b.pass && total >= 300 && secs < 60.0,
              "stated grid " + a.detail + "; n=5 a_i<=4 " + b.detail + "; " + std::to_string(total) + " distinct cases"};
    return o;
  });

  all &= criterion(2, "n=1 base case", [&] {
    std::vector<int> a1s;
    for (int m = 2; m <= 12; ++m)
      a1s.push_back(m);
    auto rs = parallel_map(a1s, check_base_case);
    Outcome o{true, "a1 = 2..12"};
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i].status != Status::Pass) {
        o.pass = false;
        o.detail += " [a1=" + std::to_string(a1s[i]) + " fails]";
      }
    return o;
  });

  all &= criterion(3, "Ext-algebra structure", [&] { return over(rec_wide, check_ext); });

  all &= criterion(4, "grading identities (n <= 6, a_i <= 6)", [&] { return over(grid(1, 6, 6), check_grading); });

  all &= criterion(5, "matrix-factorization oracle", [&] {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = over(join(grid(1, 2, 4), grid(3, 3, 3)), check_oracle);
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > 300.0) {
      o.pass = false;
      o.detail += " [over 5 min]";
    }
    return o;
  });

  all &= criterion(6, "VGIT windows", [&] { return over(grid(1, 4, 4), check_vgit); });

  all &= criterion(7, "root counts and darts", [&] { return over(grid(1, 4, 4), [](const ChainVector &a) { return check_roots(a); }); });

  all &= criterion(8, "equivariance", [&] {
    return over(grid(1, 3, 4), [](const ChainVector &a) { return check_equivariance(a); });
  });

  all &= criterion(9, "matching-path merge", [&] {
    return over(kMergeCases, [](const ChainVector &a) { return check_merge(a); });
  });

  all &= criterion(10, "critical-point lifting", [&] {
    return over(kMergeCases, [](const ChainVector &a) { return check_lifts(a); });
  });

  return all ? 0 : 1;
}
