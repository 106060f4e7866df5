#pragma once

// Config ingestion and the solve pipeline: free pose, contact check, case
// dispatch, verification.

#include "cpm/case_one.hpp"
#include "cpm/case_two.hpp"
#include "cpm/free_pose.hpp"
#include "cpm/geometry.hpp"
#include "cpm/mechanism.hpp"
#include "cpm/solution.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cpm {

enum class CaseKind { Auto, ZeroFreeLengths, OneNonzero };

const char* to_string(CaseKind c);
CaseKind parse_case(const std::string& s);  // auto | zero | zero-free-lengths | one-nonzero

struct RunConfig {
  MechanismParams params;  // radians
  double alpha_deg = 0;    // as given; params.alpha = deg_to_rad(alpha_deg)
  double phi1_deg = 0;
  CaseKind case_kind = CaseKind::Auto;
  std::string output_dir = "out";
  std::vector<std::string> formats{"json", "csv", "svg"};
  double tol_acc = kDefaultTolAcc;
  int o2_candidate = 0;
};

/// Parses and validates. Angles are read in degrees. Throws ParseError or
/// ValidationError (message names the field).
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Case implied by the free lengths; throws ValidationError
/// (UnsupportedFreeLengthPattern) for anything else.
CaseKind resolve_case(const MechanismParams& p, CaseKind requested);

struct SolutionView {
  EquilibriumSolution sol;
  std::optional<ContactPose<double>> pose;  // real solutions only
  int side = 0;  // sign of the plane at O2 relative to the origin: −1 origin side, +1 far side
};

struct AnalysisReport {
  std::string contact;  // in_contact, on_surface, no_contact, assumed_in_contact
  CaseKind case_used = CaseKind::Auto;
  bool solved = false;
  std::optional<Point2> point_E;
  std::optional<Point2> free_P;  // free-length pin position when assemblable
  std::vector<SolutionView> solutions;
  int total = 0;
  int accepted = 0;
  int rejected = 0;
  int real = 0;
  int real_accepted = 0;

  // case i
  int quartic_degree = 0;
  // case ii
  int resultant_degree = 0;
  int clearing_exponent = 0;
  int pole_multiplicity = 0;
  double interpolation_error = 0;
  double tol_acc = 0;
  double margin = 0;
  double max_accepted_residual = 0;
  double min_rejected_residual = 0;
  double beta_pi_gap = 0;

  double seconds = 0;  // wall time of the solve; not serialized
};

AnalysisReport run_analysis(const RunConfig& config);

}  // namespace cpm
