#include "cpm/analysis.hpp"

#include <chrono>
#include <fstream>
#include <set>

namespace cpm {

using nlohmann::json;

const char* to_string(CaseKind c) {
  switch (c) {
    case CaseKind::Auto: return "auto";
    case CaseKind::ZeroFreeLengths: return "zero-free-lengths";
    case CaseKind::OneNonzero: return "one-nonzero";
  }
  return "auto";
}

CaseKind parse_case(const std::string& s) {
  if (s == "auto") return CaseKind::Auto;
  if (s == "zero" || s == "zero-free-lengths") return CaseKind::ZeroFreeLengths;
  if (s == "one-nonzero") return CaseKind::OneNonzero;
  throw Error(ErrorCode::ValidationError, "case: unknown value '" + s + "'");
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(field, "must be finite");
  return v;
}

Point2 point(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) invalid(field, "expected [x, y]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

std::array<double, 3> triple(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) invalid(field, "expected three numbers");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

const std::set<std::string> kRequired{"P_M", "alpha_deg", "P_A1_in1", "P_A2_in2", "P_P_in2",
                                      "P_O1", "phi1_deg", "k", "L0"};
const std::set<std::string> kOptional{"case", "output_dir", "formats", "tolerances", "o2_candidate"};
const std::set<std::string> kFormats{"json", "csv", "svg"};

}  // namespace

CaseKind resolve_case(const MechanismParams& p, CaseKind requested) {
  const bool zero = p.L0[0] == 0 && p.L0[1] == 0 && p.L0[2] == 0;
  const bool one = p.L0[0] > 0 && p.L0[1] == 0 && p.L0[2] == 0;
  const CaseKind implied = zero ? CaseKind::ZeroFreeLengths
                           : one ? CaseKind::OneNonzero
                                 : CaseKind::Auto;
  if (implied == CaseKind::Auto) {
    invalid("L0", "UnsupportedFreeLengthPattern: need all zero, or only L01 nonzero");
  }
  if (requested != CaseKind::Auto && requested != implied) {
    invalid("case", std::string("'") + to_string(requested) + "' does not match the free lengths (" +
                        to_string(implied) + ")");
  }
  return implied;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kRequired.count(key) && !kOptional.count(key)) invalid(key, "unknown key");
  }
  for (const std::string& key : kRequired) {
    if (!j.contains(key)) invalid(key, "missing");
  }

  RunConfig c;
  MechanismParams& p = c.params;
  p.P_M = point(j["P_M"], "P_M");
  c.alpha_deg = number(j["alpha_deg"], "alpha_deg");
  p.alpha = deg_to_rad(c.alpha_deg);
  p.P_A1_in1 = point(j["P_A1_in1"], "P_A1_in1");
  p.P_A2_in2 = point(j["P_A2_in2"], "P_A2_in2");
  p.P_P_in2 = point(j["P_P_in2"], "P_P_in2");
  p.P_O1 = point(j["P_O1"], "P_O1");
  c.phi1_deg = number(j["phi1_deg"], "phi1_deg");
  p.phi1 = deg_to_rad(c.phi1_deg);
  p.k = triple(j["k"], "k");
  p.L0 = triple(j["L0"], "L0");
  p.validate();

  if (j.contains("case")) {
    if (!j["case"].is_string()) invalid("case", "expected a string");
    c.case_kind = parse_case(j["case"].get<std::string>());
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) invalid("output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("formats")) {
    if (!j["formats"].is_array()) invalid("formats", "expected a list");
    c.formats.clear();
    for (const auto& f : j["formats"]) {
      if (!f.is_string() || !kFormats.count(f.get<std::string>())) {
        invalid("formats", "entries must be json, csv or svg");
      }
      c.formats.push_back(f.get<std::string>());
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) invalid("tolerances", "expected an object");
    for (const auto& [key, v] : t.items()) {
      if (key != "acceptance") invalid("tolerances." + key, "unknown key");
      c.tol_acc = number(v, "tolerances.acceptance");
      if (!(c.tol_acc > 0)) invalid("tolerances.acceptance", "must be > 0");
    }
  }
  if (j.contains("o2_candidate")) {
    if (!j["o2_candidate"].is_number_integer()) invalid("o2_candidate", "expected an integer");
    c.o2_candidate = j["o2_candidate"].get<int>();
    if (c.o2_candidate < 0 || c.o2_candidate > 1) invalid("o2_candidate", "must be 0 or 1");
  }
  resolve_case(p, c.case_kind);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  const MechanismParams& p = c.params;
  auto pt = [](const Point2& v) { return json::array({v.x(), v.y()}); };
  json j;
  j["P_M"] = pt(p.P_M);
  j["alpha_deg"] = c.alpha_deg;
  j["P_A1_in1"] = pt(p.P_A1_in1);
  j["P_A2_in2"] = pt(p.P_A2_in2);
  j["P_P_in2"] = pt(p.P_P_in2);
  j["P_O1"] = pt(p.P_O1);
  j["phi1_deg"] = c.phi1_deg;
  j["k"] = p.k;
  j["L0"] = p.L0;
  j["case"] = to_string(c.case_kind);
  j["output_dir"] = c.output_dir;
  j["formats"] = c.formats;
  j["tolerances"] = {{"acceptance", c.tol_acc}};
  j["o2_candidate"] = c.o2_candidate;
  return j;
}

namespace {

template <typename F>
auto staged(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.in_stage(stage);
  }
}

SolutionView view_of(const EquilibriumSolution& s, const Anchors<double>& a,
                     const PlaneSpec<double>& plane) {
  SolutionView v{s, std::nullopt, 0};
  if (s.is_real) {
    v.pose = pose_from(s.L.real(), s.beta.real(), a);
    const double side = plane.evaluate(v.pose->P_O2);
    // origin evaluates to D0
    v.side = (side > 0) == (plane.offset > 0) ? -1 : 1;
  }
  return v;
}

}  // namespace

AnalysisReport run_analysis(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const MechanismParams& p = config.params;
  p.validate();

  AnalysisReport r;
  r.tol_acc = config.tol_acc;
  const PlaneSpec<double> plane = make_plane(p.alpha, p.P_M);

  std::optional<Point2> free_p;
  try {
    free_p = free_point_p_fixed(p, config.o2_candidate);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotAssemblable) throw e.in_stage("free pose");
  }
  if (free_p) {
    r.free_P = free_p;
    const Contact c = staged("contact", [&] { return classify_contact(*free_p, plane); });
    r.contact = to_string(c);
    if (c == Contact::NoContact) {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return r;
    }
  } else {
    r.contact = "assumed_in_contact";
  }

  r.case_used = resolve_case(p, config.case_kind);
  const Anchors<double> a = staged("point E", [&] { return make_anchors<double>(p); });
  r.point_E = a.E;

  std::vector<EquilibriumSolution> sols;
  if (r.case_used == CaseKind::ZeroFreeLengths) {
    const CaseIResult res = staged("case i", [&] { return solve_case_i(p); });
    r.quartic_degree = res.degree;
    sols = res.solutions;
  } else {
    const CaseIIResult res = staged("case ii", [&] { return solve_case_ii(p, config.tol_acc); });
    r.resultant_degree = res.resultant.degree;
    r.clearing_exponent = res.resultant.clearing_exponent;
    r.pole_multiplicity = res.resultant.pole_multiplicity;
    r.interpolation_error = res.resultant.interpolation.holdout_error;
    r.margin = res.margin;
    r.max_accepted_residual = res.max_accepted_residual;
    r.min_rejected_residual = res.min_rejected_residual;
    r.beta_pi_gap = res.beta_pi_gap;
    sols = res.solutions;
  }
  r.solved = true;
  for (const auto& s : sols) {
    r.solutions.push_back(view_of(s, a, plane));
    ++r.total;
    if (s.accepted) ++r.accepted;
    else ++r.rejected;
    if (s.is_real) ++r.real;
    if (s.is_real && s.accepted) ++r.real_accepted;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace cpm
