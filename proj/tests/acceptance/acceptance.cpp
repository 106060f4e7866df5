// Acceptance criteria. Each prints one line:
//   PASS|FAIL <name>: <details>
// Run with a criterion name, or with no name to run them all.

#include "cpm/analysis.hpp"
#include "cpm/case_one.hpp"
#include "cpm/case_two.hpp"
#include "cpm/free_pose.hpp"
#include "cpm/report.hpp"
#include "cpm/resultant.hpp"

#include "../support.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

using namespace cpm;
using namespace cpm::test;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass;
  std::string details;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct Options {
  std::string cli;
  fs::path work;
};

// ---------------------------------------------------------------------------

Outcome zero_free_length_roots(const Options&) {
  const auto t0 = std::chrono::steady_clock::now();
  const CaseIResult r = solve_case_i(reference_params());
  const double t = seconds_since(t0);
  const double gap = pairing_gap(kZeroFreeRoots, as_roots(r.solutions, false));
  const bool ok = r.solutions.size() == 4 && gap <= 5e-4 && t < 0.1;
  return {ok, fmt("%zu roots, max deviation %.2e (tol 5e-4), %.4f s (limit 0.1)", r.solutions.size(),
                  gap, t)};
}

Outcome one_free_length_roots(const Options&) {
  const auto t0 = std::chrono::steady_clock::now();
  const CaseIIResult r = solve_case_ii(reference_params(1.0));
  const double t = seconds_since(t0);

  // the 8 real rows alone, for the record
  const std::vector<Root> table = one_nonzero_roots();
  const std::vector<Root> real_rows(table.begin(), table.begin() + 8);
  std::vector<Root> real_got;
  for (const auto& s : r.solutions)
    if (s.accepted && s.is_real) real_got.push_back({s.beta, s.L});
  const double real_gap = pairing_gap(real_rows, real_got);
  const double gap = pairing_gap(table, as_roots(r.solutions, true));
  double nearest = 0;  // worst row-to-nearest-root distance, without one-to-one pairing
  for (const Root& row : table) nearest = std::max(nearest, pairing_gap({row}, as_roots(r.solutions, true)));

  const bool counts = r.resultant.degree == 48 && r.solutions.size() == 48 && r.accepted == 36 &&
                      r.real == 8;
  const bool ok = counts && gap <= 1e-3 && t < 10;
  return {ok, fmt("degree %d, %zu candidates, %d accepted, %d real [%s]; values: max deviation %.3e "
                  "(real rows %.3e, nearest-root bound %.3e, tol 1e-3) [%s]; %.2f s (limit 10)",
                  r.resultant.degree, r.solutions.size(), r.accepted, r.real,
                  counts ? "ok" : "mismatch", gap, real_gap, nearest, gap <= 1e-3 ? "ok" : "mismatch", t)};
}

Outcome filter_margin(const Options&) {
  const CaseIIResult r = solve_case_ii(reference_params(1.0));
  const bool ok = r.rejected == 12 && r.margin >= 100;
  return {ok, fmt("max accepted %.2e, min rejected %.2e over %d rejected, ratio %.3g (need >= 100)",
                  r.max_accepted_residual, r.min_rejected_residual, r.rejected, r.margin)};
}

Outcome random_residuals(const Options&) {
  std::mt19937_64 rng(20240601);
  double worst_i = 0;
  int roots_i = 0;
  for (int n = 0; n < 200; ++n) {
    const MechanismParams p = random_params(rng);
    for (const auto& s : solve_case_i(p).solutions) {
      const auto res = scaled_residual(p, s.L, s.beta);
      worst_i = std::max({worst_i, res.force, res.moment});
      ++roots_i;
    }
  }

  std::uniform_real_distribution<double> u(0.3, 2.0);
  double worst_ii = 0;
  int roots_ii = 0, failures = 0;
  std::string first_failure;
  for (int n = 0; n < 20; ++n) {
    const MechanismParams p = random_params(rng, u(rng));
    const Anchors<double> a = make_anchors<double>(p);
    const double ell = a.length_scale, j1 = p.k[0] + p.k[1] + p.k[2];
    try {
      for (const auto& s : solve_case_ii(p).solutions) {
        if (!s.accepted) continue;
        const auto pose = pose_from(s.L, s.beta, a);
        const auto t = abcd_at(pose, a);
        const Complex L1 = std::sqrt(l1_squared(pose, a));
        const double sf = s.branch[0] == '+' ? 1 : -1;
        const double sm = s.branch[1] == '+' ? 1 : -1;
        worst_ii = std::max(worst_ii, std::abs(t.A * L1 - sf * t.B) /
                                          (std::abs(t.A * L1) + std::abs(t.B) + j1 * ell * ell));
        worst_ii = std::max(worst_ii, std::abs(t.C * L1 - sm * t.D) /
                                          (std::abs(t.C * L1) + std::abs(t.D) + j1 * ell * ell * ell));
        ++roots_ii;
      }
    } catch (const Error& e) {
      if (failures++ == 0) first_failure = e.what();
    }
  }
  const bool ok = worst_i <= 1e-8 && worst_ii <= 1e-6 && failures == 0;
  std::string d = fmt("zero free length: %d roots, worst %.2e (tol 1e-8); one free length: %d accepted "
                      "roots, worst %.2e (tol 1e-6), %d solver failures",
                      roots_i, worst_i, roots_ii, worst_ii, failures);
  if (failures) d += " (first: " + first_failure + ")";
  return {ok, d};
}

Outcome brute_force_scan(const Options&) {
  const MechanismParams p = reference_params();
  const Anchors<double> a = make_anchors<double>(p);
  const double j1 = p.k[0] + p.k[1] + p.k[2], ell = a.length_scale;
  auto G = [&](double L, double b) {
    const auto pose = pose_from(L, b, a);
    return Eigen::Vector2d(force_projection_residual(pose, a) / (j1 * ell),
                           moment_residual(pose, a) / (j1 * ell * ell));
  };

  const int nb = 720, nl = 300;
  const double pi = std::numbers::pi;
  auto bval = [&](int i) { return -pi + 2 * pi * i / nb; };
  auto lval = [&](int j) { return 30.0 * j / nl; };
  std::vector<double> g((nb + 1) * (nl + 1));
  for (int i = 0; i <= nb; ++i)
    for (int j = 0; j <= nl; ++j) g[i * (nl + 1) + j] = G(lval(j), bval(i)).squaredNorm();

  std::vector<Eigen::Vector2d> found;  // (beta, L)
  int starts = 0;
  for (int i = 0; i <= nb; ++i) {
    for (int j = 0; j <= nl; ++j) {
      const double v = g[i * (nl + 1) + j];
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && ii <= nb && jj >= 0 && jj <= nl && g[ii * (nl + 1) + jj] < v) {
            minimum = false;
            break;
          }
        }
      if (!minimum) continue;
      ++starts;
      double L = lval(j), b = bval(i);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const Eigen::Vector2d r = G(L, b);
        const double h = 1e-7;
        Eigen::Matrix2d J;
        J.col(0) = (G(L + h, b) - G(L - h, b)) / (2 * h);
        J.col(1) = (G(L, b + h) - G(L, b - h)) / (2 * h);
        const Eigen::Vector2d step = J.colPivHouseholderQr().solve(-r);
        if (!step.allFinite()) break;
        L += step(0);
        b += step(1);
        if (step.norm() < 1e-13 * (1 + std::abs(L))) {
          converged = true;
          break;
        }
      }
      b = std::remainder(b, 2 * pi);
      if (!converged || L < 0 || L > 30 || G(L, b).norm() > 1e-10) continue;
      bool dup = false;
      for (const auto& f : found) dup |= std::abs(f(0) - b) < 1e-6 && std::abs(f(1) - L) < 1e-6;
      if (!dup) found.emplace_back(b, L);
    }
  }

  std::vector<Eigen::Vector2d> quartic;
  for (const auto& s : solve_case_i(p).solutions)
    if (s.is_real && s.L.real() >= 0 && s.L.real() <= 30) quartic.emplace_back(s.beta.real(), s.L.real());

  auto near_any = [](const Eigen::Vector2d& x, const std::vector<Eigen::Vector2d>& set) {
    for (const auto& y : set)
      if (std::abs(x(0) - y(0)) <= 1e-3 && std::abs(x(1) - y(1)) <= 1e-3) return true;
    return false;
  };
  int stray = 0, missed = 0;
  for (const auto& f : found) stray += !near_any(f, quartic);
  for (const auto& q : quartic) missed += !near_any(q, found);
  const bool ok = stray == 0 && missed == 0 && !quartic.empty();
  return {ok, fmt("%d scan minima refined, %zu distinct equilibria, %zu quartic roots in range; "
                  "%d unexplained, %d missed",
                  starts, found.size(), quartic.size(), stray, missed)};
}

Outcome free_pose_random(const Options&) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_circle = 0, worst_dialytic = 0;
  int raised = 0, tried_bad = 0;
  for (int n = 0; n < 100; ++n) {
    const double d1 = 1 + 6 * u(rng);
    const Point2 a2(d1 * (1.6 * u(rng) - 0.3), 0.3 + 4 * u(rng));
    const double L01 = 0.3 + 4 * u(rng);
    const double ang = 2 * std::numbers::pi * u(rng);
    const Point2 o2 = L01 * Point2(std::cos(ang), std::sin(ang));
    const double d2 = (o2 - a2).norm();
    const double L02 = a2.norm(), L03 = (a2 - Point2(d1, 0)).norm();

    const Point2 A2 = solve_a2(L02, L03, d1);
    worst_circle = std::max({worst_circle, std::abs(A2.norm() - L02) / (1 + L02),
                             std::abs((A2 - Point2(d1, 0)).norm() - L03) / (1 + L03)});
    for (const auto& c : solve_o2(A2, L01, d2)) {
      worst_circle = std::max({worst_circle, std::abs(c.O2_in1.norm() - L01) / (1 + L01),
                               std::abs((c.O2_in1 - A2).norm() - d2) / (1 + d2)});
      const auto k = dialytic_coefficients(A2, L01, d2, c.O2_in1.x());
      const double scale = std::max({1.0, k.B * k.B, k.C * k.C, k.A * k.A * std::abs(k.C)});
      worst_dialytic = std::max(worst_dialytic, std::abs(dialytic_4x4_residual(k.A, k.B, k.C)) / scale);
    }

    // broken triangle for A2, then disjoint circles for O2
    auto raises = [](auto f) {
      try {
        f();
      } catch (const Error& e) {
        return e.code() == ErrorCode::NotAssemblable;
      }
      return false;
    };
    const double short_by = 0.01 + u(rng);
    raised += raises([&] { solve_a2(L02, std::max(0.0, d1 - L02 - short_by), d1); });
    raised += raises([&] { solve_o2(A2, L01, std::max(0.0, A2.norm() - L01 - short_by)); });
    tried_bad += 2;
  }
  const bool ok = worst_circle <= 1e-9 && worst_dialytic <= 1e-9 && raised == tried_bad;
  return {ok, fmt("circle residual %.2e, dialytic residual %.2e (tol 1e-9); NotAssemblable on %d/%d "
                  "bad inputs",
                  worst_circle, worst_dialytic, raised, tried_bad)};
}

Outcome frame_invariance(const Options&) {
  const MechanismParams p = reference_params();
  const auto base = as_roots(solve_case_i(p).solutions, false);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-50, 50);
  double worst = 0;
  for (int n = 0; n < 50; ++n) {
    const auto T = make_transform(u(rng) / 5, Point2(u(rng), u(rng)));
    MechanismParams q = p;
    q.P_M = T.apply(p.P_M);
    q.P_O1 = T.apply(p.P_O1);
    q.alpha = p.alpha + T.angle;
    q.phi1 = p.phi1 + T.angle;
    const auto moved = as_roots(solve_case_i(q).solutions, false);
    if (moved.size() != base.size()) {
      worst = std::numeric_limits<double>::infinity();
      break;
    }
    for (const auto& r : base) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : moved) {
        const double db = std::abs(r.beta - m.beta) / std::max(1.0, std::abs(r.beta));
        const double dl = std::abs(r.L - m.L) / std::max(1.0, std::abs(r.L));
        best = std::min(best, std::max(db, dl));
      }
      worst = std::max(worst, best);
    }
  }
  return {worst <= 1e-9, fmt("50 transforms, worst relative change %.2e (tol 1e-9)", worst)};
}

Quartic<Complex> quartic_from(const std::vector<Complex>& roots, Complex lead) {
  const auto p = CPolynomial<double>::from_roots(roots, lead);
  Quartic<Complex> q{};
  for (int k = 0; k <= 4; ++k) q[k] = p[k];
  return q;
}

Outcome resultant_engine(const Options&) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(-1, 1);
  auto rc = [&](double s) { return Complex(s * u(rng), s * u(rng)); };

  // polynomial matrix determinant against direct evaluation
  PolyMatrix<double> m(6);
  for (auto& e : m.entries) {
    std::vector<Complex> c(5);
    for (auto& z : c) z = rc(1);
    e = CPolynomial<double>(c);
  }
  const auto d = polymatrix_det(m);
  double det_err = 0;
  for (int i = 0; i < 20; ++i) {
    const Complex x = rc(1.5);
    const Complex direct = m.at(x).determinant();
    det_err = std::max(det_err, std::abs(d(x) - direct) / std::max(1.0, std::abs(direct)));
  }

  // vanishing iff a shared root: compare with the resultant built from the roots
  int correct = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<Complex> r{rc(2), rc(2), rc(2), rc(2)}, s{rc(2), rc(2), rc(2), rc(2)};
    const bool share = i % 2 == 0;
    if (share) s[i % 4] = r[(i / 2) % 4];
    const Complex a = 1.0 + rc(0.5), b = 1.0 + rc(0.5);
    const auto F = quartic_from(r, a), M = quartic_from(s, b);
    Complex res = std::pow(a, 4) * std::pow(b, 4);
    double scale = std::pow(std::abs(a), 4) * std::pow(std::abs(b), 4);
    for (const auto& x : r)
      for (const auto& y : s) {
        res *= x - y;
        scale *= std::abs(x) + std::abs(y);
      }
    const Complex det = dialytic_matrix(F, M).determinant();
    const bool vanishes = std::abs(det) <= 1e-10 * scale;
    const bool agrees = share || std::abs(std::abs(det) - std::abs(res)) <= 1e-8 * std::abs(res);
    correct += vanishes == share && agrees;
  }

  // degree-48 root recovery
  std::uniform_real_distribution<double> lg(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  double root_err = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> roots;
    for (int i = 0; i < 48; ++i) roots.push_back(std::polar(std::exp(lg(rng)), ang(rng)));
    std::vector<Complex> got = poly_roots(CPolynomial<double>::from_roots(roots)).roots;
    for (const auto& w : roots) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < got.size(); ++i)
        if (std::abs(got[i] - w) < std::abs(got[best] - w)) best = i;
      root_err = std::max(root_err, std::abs(got[best] - w) / std::abs(w));
      got.erase(got.begin() + static_cast<long>(best));
    }
  }
  const bool ok = det_err <= 1e-8 && correct == 100 && root_err <= 1e-6;
  return {ok, fmt("det interpolation %.2e (tol 1e-8); shared-root test %d/100; degree-48 roots %.2e "
                  "(tol 1e-6)",
                  det_err, correct, root_err)};
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

bool well_formed_svg(const fs::path& p) {
  try {
    boost::property_tree::ptree t;
    boost::property_tree::read_xml(p.string(), t);
    return t.count("svg") == 1;
  } catch (const std::exception&) {
    return false;
  }
}

Outcome cli_end_to_end(const Options& o) {
  if (o.cli.empty()) return {false, "no --cli binary given"};
  fs::remove_all(o.work);
  fs::create_directories(o.work);
  std::vector<std::string> problems;
  auto problem = [&](const std::string& s) { problems.push_back(s); };

  struct Run {
    double L01;
    std::size_t rows, accepted, real, svgs;
  };
  for (const Run& run : {Run{0, 4, 4, 2, 2}, Run{1, 48, 36, 8, 8}}) {
    const std::string tag = run.L01 == 0 ? "zero" : "one";
    const fs::path cfg = o.work / (tag + ".json");
    const fs::path out = o.work / (tag + "_out");
    std::ofstream(cfg) << json{{"P_M", {19.5, 6.25}},      {"alpha_deg", 150},
                               {"P_A1_in1", {5.5, 0}},     {"P_A2_in2", {4.5, 0}},
                               {"P_P_in2", {2.25, 2.5}},   {"P_O1", {5, 3.5}},
                               {"phi1_deg", 20},           {"k", {1.5, 1.85, 1.45}},
                               {"L0", {run.L01, 0, 0}}}.dump(2);
    const std::string cmd = "\"" + o.cli + "\" solve --config \"" + cfg.string() + "\" --out \"" +
                            out.string() + "\" > \"" + (o.work / (tag + ".log")).string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      problem(tag + ": exit status " + std::to_string(rc));
      continue;
    }

    const auto rows = read_csv(out / "solutions.csv");
    if (rows.size() != run.rows + 1) problem(tag + ": csv has " + std::to_string(rows.size()) + " lines");
    std::vector<Root> csv_roots;
    std::size_t acc = 0, real = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& c = rows[i];
      if (c.size() != 9) {
        problem(tag + ": csv row width");
        break;
      }
      real += c[7] == "1";
      acc += c[8] == "1";
      if (c[8] == "1")
        csv_roots.push_back({{std::stod(c[1]), std::stod(c[2])}, {std::stod(c[3]), std::stod(c[4])}});
    }
    if (acc != run.accepted) problem(tag + ": csv accepted " + std::to_string(acc));
    if (real != run.real) problem(tag + ": csv real " + std::to_string(real));

    std::ifstream jin(out / "report.json");
    const json rep = json::parse(jin, nullptr, false);
    if (rep.is_discarded()) {
      problem(tag + ": report.json does not parse");
    } else {
      const auto& cnt = rep["counts"];
      if (cnt["total"] != run.rows || cnt["accepted"] != run.accepted || cnt["real"] != run.real)
        problem(tag + ": json counts " + cnt.dump());
    }

    // values: published table for zero free length, in-process solve otherwise
    if (run.L01 == 0) {
      const double gap = pairing_gap(kZeroFreeRoots, csv_roots);
      if (gap > 5e-4) problem(fmt("zero: csv values off by %.2e", gap));
    } else {
      const auto ref = as_roots(solve_case_ii(reference_params(1.0)).solutions, true);
      const double gap = pairing_gap(ref, csv_roots);
      if (gap > 1e-6) problem(fmt("one: csv values differ from the library by %.2e", gap));
    }

    std::size_t svgs = 0;
    for (std::size_t k = 1; fs::exists(out / ("solution_" + std::to_string(k) + ".svg")); ++k) {
      ++svgs;
      if (!well_formed_svg(out / ("solution_" + std::to_string(k) + ".svg")))
        problem(tag + ": solution_" + std::to_string(k) + ".svg is not well formed");
    }
    if (svgs != run.svgs) problem(tag + ": " + std::to_string(svgs) + " solution svgs");
    if (!well_formed_svg(out / "overview.svg")) {
      problem(tag + ": overview.svg is not well formed");
    } else if (run.L01 != 0) {
      boost::property_tree::ptree t;
      boost::property_tree::read_xml((out / "overview.svg").string(), t);
      int origin = 0, far = 0;
      std::function<void(const boost::property_tree::ptree&)> walk = [&](const auto& node) {
        for (const auto& [name, child] : node) {
          if (name == "g") {
            const auto cls = child.template get_optional<std::string>("<xmlattr>.class");
            const auto side = child.template get_optional<std::string>("<xmlattr>.data-side");
            if (cls && *cls == "solution" && side) (*side == "origin" ? origin : far)++;
          }
          walk(child);
        }
      };
      walk(t);
      if (origin != 4 || far != 4) problem(fmt("one: overview sides %d origin / %d far", origin, far));
    }
  }

  if (problems.empty()) return {true, "both configurations: csv, json, svg counts and values as expected"};
  std::string d;
  for (const auto& s : problems) d += (d.empty() ? "" : "; ") + s;
  return {false, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> criteria{
      {"zero_free_length_roots", zero_free_length_roots},
      {"one_free_length_roots", one_free_length_roots},
      {"filter_margin", filter_margin},
      {"random_residuals", random_residuals},
      {"brute_force_scan", brute_force_scan},
      {"free_pose_random", free_pose_random},
      {"frame_invariance", frame_invariance},
      {"resultant_engine", resultant_engine},
      {"cli_end_to_end", cli_end_to_end},
  };

  CLI::App app{"acceptance criteria"};
  std::vector<std::string> names;
  Options opt;
  std::string work = (fs::temp_directory_path() / "cpm_acceptance").string();
  app.add_option("criteria", names, "criteria to run (default: all)");
  app.add_option("--cli", opt.cli, "path to the cpm binary");
  app.add_option("--work", work, "scratch directory for CLI runs");
  CLI11_PARSE(app, argc, argv);
  opt.work = work;

  if (names.empty())
    for (const auto& c : criteria) names.push_back(c.first);

  int failed = 0;
  for (const auto& n : names) {
    auto it = std::find_if(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == n; });
    if (it == criteria.end()) {
      std::printf("FAIL %s: unknown criterion\n", n.c_str());
      ++failed;
      continue;
    }
    Outcome o;
    try {
      o = it->second(opt);
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", n.c_str(), o.details.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
