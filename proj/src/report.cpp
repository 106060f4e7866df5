#include "cpm/report.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cpm {

using nlohmann::json;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string sci6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string solutions_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "index,beta_re,beta_im,L_re,L_im,residual_force,residual_moment,real_flag,accepted_flag\n";
  int i = 1;
  for (const auto& v : r.solutions) {
    const auto& s = v.sol;
    out << i++ << ',' << fixed6(s.beta.real()) << ',' << fixed6(s.beta.imag()) << ','
        << fixed6(s.L.real()) << ',' << fixed6(s.L.imag()) << ',' << sci6(s.residual_force) << ','
        << sci6(s.residual_moment) << ',' << (s.is_real ? 1 : 0) << ',' << (s.accepted ? 1 : 0)
        << '\n';
  }
  return out.str();
}

json report_json(const AnalysisReport& r) {
  json j;
  j["contact"] = r.contact;
  j["case"] = r.solved ? json(to_string(r.case_used)) : json(nullptr);
  j["solved"] = r.solved;
  j["point_E"] = r.point_E ? json::array({r.point_E->x(), r.point_E->y()}) : json(nullptr);
  j["free_P"] = r.free_P ? json::array({r.free_P->x(), r.free_P->y()}) : json(nullptr);
  j["counts"] = {{"total", r.total},       {"accepted", r.accepted},
                 {"rejected", r.rejected}, {"real", r.real},
                 {"real_accepted", r.real_accepted}};
  json d = json::object();
  if (r.solved && r.case_used == CaseKind::ZeroFreeLengths) {
    d["quartic_degree"] = r.quartic_degree;
  } else if (r.solved) {
    d["resultant_degree"] = r.resultant_degree;
    d["clearing_exponent"] = r.clearing_exponent;
    d["pole_multiplicity"] = r.pole_multiplicity;
    d["interpolation_error"] = r.interpolation_error;
    d["tol_acc"] = r.tol_acc;
    d["max_accepted_residual"] = number_or_null(r.max_accepted_residual);
    d["min_rejected_residual"] = number_or_null(r.min_rejected_residual);
    d["margin"] = number_or_null(r.margin);
    d["beta_pi_gap"] = number_or_null(r.beta_pi_gap);
  }
  j["diagnostics"] = d;

  json sols = json::array();
  int i = 1;
  for (const auto& v : r.solutions) {
    const auto& s = v.sol;
    json e;
    e["index"] = i++;
    e["beta"] = complex_json(s.beta);
    e["L"] = complex_json(s.L);
    e["x_beta"] = std::isfinite(s.x_beta.real()) ? complex_json(s.x_beta) : json(nullptr);
    e["residual_force"] = number_or_null(s.residual_force);
    e["residual_moment"] = number_or_null(s.residual_moment);
    e["real"] = s.is_real;
    e["accepted"] = s.accepted;
    if (!s.branch.empty()) e["branch"] = s.branch;
    e["normal_force"] = number_or_null(s.normal_force);
    if (v.side != 0) e["side"] = v.side;
    e["backsub_fallback"] = s.backsub_fallback;
    if (!s.note.empty()) e["note"] = s.note;
    sols.push_back(e);
  }
  j["solutions"] = sols;
  return j;
}

namespace {

struct Frame {
  double xmin, ymin, scale, height;
  double X(const Point2& p) const { return (p.x() - xmin) * scale; }
  double Y(const Point2& p) const { return height - (p.y() - ymin) * scale; }
};

Frame frame_for(const std::vector<Point2>& pts) {
  double xmin = pts[0].x(), xmax = xmin, ymin = pts[0].y(), ymax = ymin;
  for (const auto& q : pts) {
    xmin = std::min(xmin, q.x());
    xmax = std::max(xmax, q.x());
    ymin = std::min(ymin, q.y());
    ymax = std::max(ymax, q.y());
  }
  const double pad = 0.1 * std::max({xmax - xmin, ymax - ymin, 1.0});
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;
  const double scale = 640.0 / (xmax - xmin);
  return {xmin, ymin, scale, (ymax - ymin) * scale};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string spring(const Frame& f, const Point2& a, const Point2& b, const char* cls) {
  const Point2 d = b - a;
  const double len = d.norm();
  std::ostringstream s;
  s << "<polyline class=\"" << cls << "\" points=\"" << num(f.X(a)) << ',' << num(f.Y(a));
  if (len > 1e-9) {
    const Point2 n(-d.y() / len, d.x() / len);
    const int coils = 10;
    const double amp = std::min(0.25, 0.08 * len);
    for (int i = 1; i < 2 * coils; ++i) {
      const double t = 0.1 + 0.8 * i / (2.0 * coils);
      const Point2 q = a + t * d + ((i % 2) ? amp : -amp) * n;
      s << ' ' << num(f.X(q)) << ',' << num(f.Y(q));
    }
  }
  s << ' ' << num(f.X(b)) << ',' << num(f.Y(b)) << "\"/>\n";
  return s.str();
}

std::string label(const Frame& f, const Point2& p, const char* text) {
  return "<circle cx=\"" + num(f.X(p)) + "\" cy=\"" + num(f.Y(p)) + "\" r=\"3\"/>\n<text x=\"" +
         num(f.X(p) + 5) + "\" y=\"" + num(f.Y(p) - 5) + "\">" + text + "</text>\n";
}

const char* kStyle =
    "<style>line.surface{stroke:#555;stroke-width:2}line.base{stroke:#000;stroke-width:4}"
    "polygon.top{fill:#cde;stroke:#235;stroke-width:2;fill-opacity:0.6}"
    "polyline{fill:none;stroke:#b33;stroke-width:1.2}text{font:11px sans-serif}</style>\n";

std::string header(const Frame& f) {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"" << num(f.height)
    << "\" viewBox=\"0 0 640 " << num(f.height) << "\">\n"
    << kStyle;
  return s.str();
}

std::string surface_and_base(const Frame& f, const Anchors<double>& a) {
  const double reach = 4 * (640.0 / f.scale);
  const Point2 s0 = a.E - reach * a.surface_dir;
  const Point2 s1 = a.E + reach * a.surface_dir;
  std::ostringstream s;
  s << "<line class=\"surface\" x1=\"" << num(f.X(s0)) << "\" y1=\"" << num(f.Y(s0)) << "\" x2=\""
    << num(f.X(s1)) << "\" y2=\"" << num(f.Y(s1)) << "\"/>\n";
  s << "<line class=\"base\" x1=\"" << num(f.X(a.O1)) << "\" y1=\"" << num(f.Y(a.O1)) << "\" x2=\""
    << num(f.X(a.A1)) << "\" y2=\"" << num(f.Y(a.A1)) << "\"/>\n";
  s << label(f, a.O1, "O1") << label(f, a.A1, "A1") << label(f, a.E, "E");
  return s.str();
}

std::string platform(const Frame& f, const Anchors<double>& a, const ContactPose<double>& q,
                     bool labels) {
  std::ostringstream s;
  s << "<polygon class=\"top\" points=\"" << num(f.X(q.P_O2)) << ',' << num(f.Y(q.P_O2)) << ' '
    << num(f.X(q.P_A2)) << ',' << num(f.Y(q.P_A2)) << ' ' << num(f.X(q.P_P)) << ','
    << num(f.Y(q.P_P)) << "\"/>\n";
  s << spring(f, a.O1, q.P_O2, "spring1") << spring(f, a.O1, q.P_A2, "spring2")
    << spring(f, a.A1, q.P_A2, "spring3");
  if (labels) s << label(f, q.P_O2, "O2") << label(f, q.P_A2, "A2") << label(f, q.P_P, "P");
  return s.str();
}

std::vector<Point2> pose_points(const ContactPose<double>& q) {
  return {q.P_O2, q.P_A2, q.P_P};
}

}  // namespace

std::string solution_svg(const MechanismParams& p, const SolutionView& v, int index) {
  const Anchors<double> a = make_anchors<double>(p);
  std::vector<Point2> pts{a.O1, a.A1, a.E};
  if (v.pose) {
    const auto more = pose_points(*v.pose);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  const Frame f = frame_for(pts);
  std::ostringstream s;
  s << header(f);
  s << "<title>solution " << index << ": beta = " << fixed6(v.sol.beta.real())
    << " rad, L = " << fixed6(v.sol.L.real()) << " m</title>\n";
  s << surface_and_base(f, a);
  if (v.pose) s << platform(f, a, *v.pose, true);
  s << "<text x=\"10\" y=\"16\">#" << index << "  beta = " << fixed6(v.sol.beta.real())
    << "  L = " << fixed6(v.sol.L.real()) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string overview_svg(const MechanismParams& p, const AnalysisReport& r) {
  const Anchors<double> a = make_anchors<double>(p);
  std::vector<Point2> pts{a.O1, a.A1, a.E};
  int near = 0, far = 0;
  for (const auto& v : r.solutions) {
    if (!v.pose || !v.sol.accepted) continue;
    const auto more = pose_points(*v.pose);
    pts.insert(pts.end(), more.begin(), more.end());
    (v.side < 0 ? near : far)++;
  }
  const Frame f = frame_for(pts);
  std::ostringstream s;
  s << header(f);
  s << "<title>overview of real solutions</title>\n";
  s << surface_and_base(f, a);
  int i = 1;
  for (const auto& v : r.solutions) {
    const int index = i++;
    if (!v.pose || !v.sol.accepted) continue;
    s << "<g class=\"solution\" data-index=\"" << index << "\" data-side=\""
      << (v.side < 0 ? "origin" : "far") << "\">\n"
      << platform(f, a, *v.pose, false) << "</g>\n";
  }
  s << "<text x=\"10\" y=\"16\">origin side: " << near << "  far side: " << far << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

bool wants(const RunConfig& c, const char* fmt) {
  return std::find(c.formats.begin(), c.formats.end(), fmt) != c.formats.end();
}

}  // namespace

std::vector<std::string> emit_outputs(const RunConfig& cfg, const AnalysisReport& r,
                                      const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const fs::path path = fs::path(dir) / name;
    write_file(path, text);
    written.push_back(path.string());
  };
  if (wants(cfg, "csv")) put("solutions.csv", solutions_csv(r));
  if (wants(cfg, "json")) put("report.json", report_json(r).dump(2) + "\n");
  if (wants(cfg, "svg")) {
    int k = 1;
    int index = 1;
    for (const auto& v : r.solutions) {
      const int idx = index++;
      if (!v.pose || !v.sol.accepted) continue;
      put("solution_" + std::to_string(k++) + ".svg", solution_svg(cfg.params, v, idx));
    }
    put("overview.svg", overview_svg(cfg.params, r));
  }
  return written;
}

}  // namespace cpm
