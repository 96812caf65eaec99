#include "chaincat/checks.hpp"
#include "chaincat/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace chaincat;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ChainVector chain_arg(const std::string &text) {
  try {
    return parse_chain(text);
  } catch (const std::exception &e) {
    throw UsageError(std::string("bad --a: ") + e.what());
  }
}

ChainVector nonempty(const ChainVector &a, const char *what) {
  if (a.empty())
    throw UsageError(std::string(what) + " needs a chain with n >= 1");
  return a;
}

// "lo..hi" or a single integer
std::pair<long long, long long> range_arg(const std::string &text, const char *flag) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      long long v = std::stoll(text);
      return {v, v};
    }
    long long lo = std::stoll(text.substr(0, dots)), hi = std::stoll(text.substr(dots + 2));
    if (lo > hi)
      throw UsageError(std::string(flag) + " range is empty");
    return {lo, hi};
  } catch (const UsageError &) {
    throw;
  } catch (const std::exception &) {
    throw UsageError(std::string("bad ") + flag + ": " + text);
  }
}

void print_json(const Json &j) { std::cout << j.dump(2) << "\n"; }

void write_file(const std::string &path, const std::string &content) {
  std::ofstream f(path);
  if (!f)
    throw UsageError("cannot write " + path);
  f << content;
}

std::string csv_matrix(const IntMatrix &m) {
  std::ostringstream o;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      o << (j ? "," : "") << m(i, j);
    o << "\n";
  }
  return o.str();
}

// ---- SVG ------------------------------------------------------------------

// Log-polar view: angle kept, radius log10|z| mapped linearly onto the
// plot so both tiny and huge roots are visible. |z| = 1 sits mid-plot.
struct LogPolar {
  double lo = -4, hi = 4, size = 600;
  double radius(double r) const {
    const double x = std::clamp((std::log10(std::max(r, 1e-300)) - lo) / (hi - lo), 0.0, 1.0);
    return 10 + x * (size / 2 - 20);
  }
  std::pair<double, double> map(Cplx z) const {
    const double rr = radius(std::abs(z)), th = std::arg(z);
    return {size / 2 + rr * std::cos(th), size / 2 - rr * std::sin(th)};
  }
  void fit(const std::vector<Cplx> &pts) {
    double mn = 0, mx = 0;
    for (auto z : pts)
      if (std::abs(z) > 0) {
        mn = std::min(mn, std::log10(std::abs(z)));
        mx = std::max(mx, std::log10(std::abs(z)));
      }
    const double span = std::max({-mn, mx, 1.0}) + 0.5;
    lo = -span;
    hi = span;
  }
};

std::string svg_sector(const LogPolar &lp, double r_in, double r_out, double th0, double th1, const char *fill) {
  std::ostringstream o;
  const int steps = 24;
  o << "<path fill=\"" << fill << "\" fill-opacity=\"0.25\" stroke=\"none\" d=\"";
  for (int i = 0; i <= steps; ++i) {
    auto [x, y] = lp.map(std::polar(r_out, th0 + (th1 - th0) * i / steps));
    o << (i ? " L " : "M ") << x << " " << y;
  }
  for (int i = steps; i >= 0; --i) {
    auto [x, y] = lp.map(std::polar(r_in, th0 + (th1 - th0) * i / steps));
    o << " L " << x << " " << y;
  }
  o << " Z\"/>\n";
  return o.str();
}

std::string svg_scene(const RootScene &sc, const DartAssignment &da, const std::vector<PathPlan> &paths) {
  LogPolar lp;
  std::vector<Cplx> all = sc.roots;
  for (auto &p : paths)
    all.insert(all.end(), p.points.begin(), p.points.end());
  lp.fit(all);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << lp.size << "\" height=\"" << lp.size
    << "\" viewBox=\"0 0 " << lp.size << " " << lp.size << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (double r : {0.5, 1.0, 2.0})
    o << "<circle cx=\"" << lp.size / 2 << "\" cy=\"" << lp.size / 2 << "\" r=\"" << lp.radius(r)
      << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  const double tiny = std::pow(10.0, lp.lo), huge = std::pow(10.0, lp.hi);
  for (long long m = 0; m < da.inner.n; ++m) {
    const double c = da.inner.center(m);
    o << svg_sector(lp, tiny, da.eps, c - da.phi, c + da.phi, "#2a6fdb");
  }
  if (sc.large)
    for (long long m = 0; m < da.outer.n; ++m) {
      const double c = da.outer.center(m);
      o << svg_sector(lp, da.r, huge, c - da.phi_outer, c + da.phi_outer, "#d9822b");
    }
  for (auto &p : paths) {
    o << "<polyline fill=\"none\" stroke=\"#2b8a3e\" stroke-width=\"1.5\" points=\"";
    for (auto z : p.points) {
      auto [x, y] = lp.map(z);
      o << x << "," << y << " ";
    }
    o << "\"/>\n";
  }
  for (std::size_t i = 0; i < sc.roots.size(); ++i) {
    auto [x, y] = lp.map(sc.roots[i]);
    const char *col = sc.cls[i] == RootClass::Small ? "#1c3d8f" : sc.cls[i] == RootClass::Large ? "#8f4a1c" : "red";
    o << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << col << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string csv_scene(const RootScene &sc, const DartAssignment &da) {
  std::ostringstream o;
  o.precision(17);
  o << "re,im,class,dart,residual\n";
  for (std::size_t i = 0; i < sc.roots.size(); ++i) {
    const long long comp = sc.cls[i] == RootClass::Small ? da.inner_component[i] : da.outer_component[i];
    o << sc.roots[i].real() << "," << sc.roots[i].imag() << "," << to_string(sc.cls[i]) << "," << comp << ","
      << sc.residuals[i] << "\n";
  }
  return o.str();
}

// ---- sweep ----------------------------------------------------------------

struct SweepConfig {
  std::pair<long long, long long> n{1, 4}, ai{2, 4};
  std::vector<std::string> checks{"recursion", "ext", "grading"};
  std::string out;
  Tolerances tol;
  bool timing = false;
};

void load_config(const std::string &path, SweepConfig &cfg) {
  std::ifstream f(path);
  if (!f)
    throw UsageError("cannot read config " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const std::exception &e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.contains("n"))
    cfg.n = range_arg(j["n"].get<std::string>(), "n");
  if (j.contains("ai"))
    cfg.ai = range_arg(j["ai"].get<std::string>(), "ai");
  if (j.contains("checks"))
    cfg.checks = j["checks"].get<std::vector<std::string>>();
  if (j.contains("out"))
    cfg.out = j["out"].get<std::string>();
  if (j.contains("timing"))
    cfg.timing = j["timing"].get<bool>();
  if (j.contains("tolerances")) {
    auto &t = j["tolerances"];
    cfg.tol.roots = t.value("roots", cfg.tol.roots);
    cfg.tol.equivariance = t.value("equivariance", cfg.tol.equivariance);
    cfg.tol.merge = t.value("merge", cfg.tol.merge);
    cfg.tol.lifts = t.value("lifts", cfg.tol.lifts);
  }
}

void validate(const SweepConfig &cfg) {
  if (cfg.n.first < 1)
    throw UsageError("sweep needs n >= 1");
  if (cfg.ai.first < 2)
    throw UsageError("sweep needs a_i >= 2");
  if (cfg.checks.empty())
    throw UsageError("no checks selected");
  for (auto &c : cfg.checks)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw UsageError("unknown check: " + c);
  for (double t : {cfg.tol.roots, cfg.tol.equivariance, cfg.tol.merge, cfg.tol.lifts})
    if (!(t > 0))
      throw UsageError("tolerances must be positive");
}

int run_sweep(const SweepConfig &cfg) {
  validate(cfg);
  std::vector<ChainVector> cases;
  for (long long n = cfg.n.first; n <= cfg.n.second; ++n)
    for (auto &a : chain_grid(static_cast<std::size_t>(n), static_cast<int>(cfg.ai.first), static_cast<int>(cfg.ai.second)))
      cases.push_back(a);
  auto t0 = std::chrono::steady_clock::now();
  auto reports = parallel_map(cases, [&](const ChainVector &a) {
    CaseReport rep{a};
    auto s0 = std::chrono::steady_clock::now();
    for (auto &name : cfg.checks) {
      CheckResult r;
      try {
        r = run_check(name, a, cfg.tol);
      } catch (const std::exception &e) {
        // checks that do not apply to this chain length
        r.check = name;
        r.status = Status::Inconclusive;
        r.witness["error"] = e.what();
      }
      rep.status = worst(rep.status, r.status);
      rep.checks.push_back(std::move(r));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    return rep;
  });
  Status overall = Status::Pass;
  std::map<std::string, std::size_t> counts{{"pass", 0}, {"inconclusive", 0}, {"fail", 0}};
  Json jcases = Json::array();
  for (auto &rep : reports) {
    overall = worst(overall, rep.status);
    counts[to_string(rep.status)]++;
    Json c{{"a", rep.a.str()}, {"status", to_string(rep.status)}};
    Json checks = Json::array();
    for (auto &r : rep.checks)
      checks.push_back(r.json());
    c["checks"] = checks;
    if (cfg.timing)
      c["seconds"] = rep.seconds;
    jcases.push_back(c);
  }
  Json report{{"n", std::to_string(cfg.n.first) + ".." + std::to_string(cfg.n.second)},
              {"ai", std::to_string(cfg.ai.first) + ".." + std::to_string(cfg.ai.second)},
              {"checks", cfg.checks},
              {"cases", cases.size()},
              {"status", to_string(overall)},
              {"counts", counts},
              {"results", jcases}};
  if (cfg.timing) {
    report["threads"] = sweep_threads();
    report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    write_file((std::filesystem::path(cfg.out) / "sweep.json").string(), report.dump(2) + "\n");
    Json summary = report;
    summary.erase("results");
    print_json(summary);
  } else {
    print_json(report);
  }
  return overall == Status::Fail ? kExitFail : kExitPass;
}

int status_exit(Status s) { return s == Status::Fail ? kExitFail : kExitPass; }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"chaincat: exceptional collections, matrix factorizations and root numerics for chain polynomials"};
  app.require_subcommand(1);
  std::string a_text;

  auto add_chain = [&](CLI::App *sub) { sub->add_option("--a", a_text, "chain vector, e.g. 2,3,2 or empty")->required(); };

  auto *inv = app.add_subcommand("invariants", "d, mu, mu_vee, weights and related numbers");
  add_chain(inv);
  auto *grading = app.add_subcommand("grading", "grading group, tau relation and Serre element");
  add_chain(grading);

  std::string format = "json";
  auto *ext = app.add_subcommand("ext", "basis, degrees, Hom table and Gram matrix of the Ext algebra");
  add_chain(ext);
  ext->add_option("--format", format, "json or csv (csv prints the Gram matrix)")->check(CLI::IsMember({"json", "csv"}));

  auto *gram = app.add_subcommand("gram", "Gram matrix of the exceptional collection");
  add_chain(gram);
  gram->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  bool as_json = false;
  auto *rec = app.add_subcommand("verify-recursion", "check R(AT(a-)) against AT(a) up to shifts");
  add_chain(rec);
  rec->add_flag("--json", as_json, "print the full JSON report");

  auto *oracle = app.add_subcommand("oracle", "independent matrix-factorization computations");
  oracle->require_subcommand(1);
  auto *oext = oracle->add_subcommand("ext", "Ext table between stabilised objects");
  add_chain(oext);
  std::string src = "E", dst = "E", twists, trange;
  oext->add_option("--src", src, "E or F")->check(CLI::IsMember({"E", "F"}));
  oext->add_option("--dst", dst, "E or F")->check(CLI::IsMember({"E", "F"}));
  oext->add_option("--twists", twists, "tau-twist range lo..hi; 'd' stands for d(a)-1 (default 0..d)");
  oext->add_option("--t", trange, "cohomological range lo..hi (default: the proven bound)");

  auto *vgit = app.add_subcommand("vgit", "weights, window intervals and membership table");
  add_chain(vgit);

  double t = 1e-3, s = 1e-3, s_phase = 0.0;
  std::string svg_path, csv_path;
  auto *roots = app.add_subcommand("roots", "roots of the critical family and their darts");
  add_chain(roots);
  roots->add_option("--t", t, "t parameter");
  roots->add_option("--s", s, "|s|");
  roots->add_option("--s-phase", s_phase, "arg s in radians");
  roots->add_option("--svg", svg_path, "write an SVG plot");
  roots->add_option("--csv", csv_path, "write one root per row");

  long long k = 0;
  auto *paths = app.add_subcommand("paths", "coil matching path from the inner to the outer dart");
  add_chain(paths);
  paths->add_option("--k", k, "coil index k >= 0")->required();
  paths->add_option("--t", t, "t > 0");
  paths->add_option("--s", s, "s");
  auto *svg_opt = paths->add_option("--svg", svg_path, "print SVG (to stdout, or to the given file)")->expected(0, 1);

  double tol = 1e-6;
  auto *merge = app.add_subcommand("merge", "y-continuation of the critical curve and its merge point");
  add_chain(merge);
  merge->add_option("--t", t, "t");
  merge->add_option("--s", s, "s");
  merge->add_option("--tol", tol, "relative tolerance for the comparison");

  SweepConfig cfg;
  std::string n_text, ai_text, checks_text, config_path;
  auto *sweep = app.add_subcommand("sweep", "run checks over a grid of chain vectors in parallel");
  sweep->add_option("--n", n_text, "chain lengths lo..hi (default 1..4)");
  sweep->add_option("--ai", ai_text, "entry range lo..hi (default 2..4)");
  sweep->add_option("--checks", checks_text,
                    "comma list from recursion,ext,grading,oracle,vgit,roots,equivariance,merge,lifts");
  sweep->add_option("--out", cfg.out, "directory for sweep.json");
  sweep->add_option("--config", config_path, "JSON config with the same fields");
  sweep->add_flag("--timing", cfg.timing, "include wall-clock times in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    std::cout << app.help();
    return kExitPass;
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*inv) {
      print_json(invariants_json(chain_arg(a_text)));
      return kExitPass;
    }
    if (*grading) {
      print_json(grading_json(chain_arg(a_text)));
      return kExitPass;
    }
    if (*ext) {
      auto a = nonempty(chain_arg(a_text), "ext");
      if (format == "csv")
        std::cout << csv_matrix(gram_AT(a));
      else
        print_json(ext_json(a));
      return kExitPass;
    }
    if (*gram) {
      auto a = chain_arg(a_text);
      if (format == "csv")
        std::cout << csv_matrix(gram_AT(a));
      else
        print_json({{"a", a.str()}, {"gram", to_json(gram_AT(a))}});
      return kExitPass;
    }
    if (*rec) {
      auto a = nonempty(chain_arg(a_text), "verify-recursion");
      auto r = check_recursion(a);
      if (as_json) {
        Json j = r.json();
        j["a"] = a.str();
        j["recursed"] = to_json(verify_recursion(a).recursed);
        print_json(j);
      } else {
        std::cout << a.str() << ": " << to_string(r.status);
        if (r.witness.contains("epsilon"))
          std::cout << " epsilon=" << r.witness["epsilon"].get<std::string>();
        std::cout << "\n";
      }
      return status_exit(r.status);
    }
    if (*oext) {
      auto a = nonempty(chain_arg(a_text), "oracle ext");
      const BigInt D = d(a);
      ExtWindow w;
      std::string tw = twists.empty() ? "0..d" : twists;
      const BigInt dd = D - 1;
      for (std::string::size_type p; (p = tw.find('d')) != std::string::npos;)
        tw.replace(p, 1, dd.str());
      auto [lo, hi] = range_arg(tw, "--twists");
      for (long long x = lo; x <= hi; ++x)
        w.twists.push_back(x);
      if (!trange.empty()) {
        auto [tl, th] = range_arg(trange, "--t");
        w.t = std::pair<BigInt, BigInt>{tl, th};
      }
      auto obj = [&](const std::string &name) { return name == "E" ? object_E(a) : object_F(a); };
      auto tab = ext_table_mf(a, obj(src), obj(dst), w);
      Json j{{"a", a.str()}, {"src", src}, {"dst", dst}};
      j.update(ext_table_json(tab));
      print_json(j);
      return kExitPass;
    }
    if (*vgit) {
      print_json(vgit_json(nonempty(chain_arg(a_text), "vgit")));
      return kExitPass;
    }
    if (*roots) {
      auto a = nonempty(chain_arg(a_text), "roots");
      auto p = chain_family(a, t, std::polar(s, s_phase));
      auto sc = solve_family(p);
      auto da = dart_classify(sc);
      Json j{{"a", a.str()}, {"t", t}, {"s", to_json(p.s)}, {"c", p.c}, {"mu", p.mu}, {"mu_minus", p.mu_minus}};
      j.update(scene_json(sc, da));
      if (t == 0.0 && s != 0.0) {
        // closed form for t = 0: z^{mu-} = c s^{d-}
        double dev = 0;
        const Cplx w = p.c * ipow(p.s, p.d_minus);
        for (auto z : sc.roots)
          dev = std::max(dev, std::abs(ipow(z, p.mu_minus) - w) / std::abs(w));
        j["closed_form_deviation"] = dev;
      }
      if (!svg_path.empty())
        write_file(svg_path, svg_scene(sc, da, {}));
      if (!csv_path.empty())
        write_file(csv_path, csv_scene(sc, da));
      print_json(j);
      const bool good = sc.violations == 0 && da.ok && sc.small == static_cast<std::size_t>(p.mu_minus) &&
                        (t == 0.0 || sc.large == static_cast<std::size_t>(p.mu));
      return good ? kExitPass : kExitFail;
    }
    if (*paths) {
      auto a = nonempty(chain_arg(a_text), "paths");
      if (k < 0)
        throw UsageError("--k must be >= 0");
      auto pl = coil_path(a, k, t, s);
      if (svg_opt->count()) {
        auto p = chain_family(a, t, s);
        auto sc = solve_family(p);
        auto svg = svg_scene(sc, dart_classify(sc), {pl});
        if (svg_path.empty())
          std::cout << svg;
        else
          write_file(svg_path, svg);
        if (svg_path.empty())
          return pl.margin > 0 ? kExitPass : kExitFail;
      }
      Json pts = Json::array();
      for (auto z : pl.points)
        pts.push_back(to_json(z));
      print_json({{"a", a.str()},
                  {"k", k},
                  {"start", to_json(pl.start)},
                  {"end", to_json(pl.end)},
                  {"inner_index", pl.inner_index},
                  {"outer_index", pl.outer_index},
                  {"margin", pl.margin},
                  {"points", pts}});
      return pl.margin > 0 ? kExitPass : kExitFail;
    }
    if (*merge) {
      auto a = nonempty(chain_arg(a_text), "merge");
      auto m = merge_report(a, t, s, tol);
      print_json(merge_json(m));
      return m.ok ? kExitPass : kExitFail;
    }
    if (*sweep) {
      if (!config_path.empty())
        load_config(config_path, cfg);
      if (!n_text.empty())
        cfg.n = range_arg(n_text, "--n");
      if (!ai_text.empty())
        cfg.ai = range_arg(ai_text, "--ai");
      if (!checks_text.empty()) {
        cfg.checks.clear();
        std::stringstream ss(checks_text);
        for (std::string c; std::getline(ss, c, ',');)
          cfg.checks.push_back(c);
      }
      return run_sweep(cfg);
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
