#pragma once

#include "cpm/analysis.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cpm {

/// index, beta_re, beta_im, L_re, L_im, residual_force, residual_moment,
/// real_flag, accepted_flag. Six decimals; residuals in exponent form.
std::string solutions_csv(const AnalysisReport& r);

/// Everything in the report except timing.
nlohmann::json report_json(const AnalysisReport& r);

/// Drawing of one real solution.
std::string solution_svg(const MechanismParams& p, const SolutionView& s, int index);

/// All real accepted solutions overlaid; each group carries data-side.
std::string overview_svg(const MechanismParams& p, const AnalysisReport& r);

/// Writes the requested formats into dir; returns the file paths written.
std::vector<std::string> emit_outputs(const RunConfig& cfg, const AnalysisReport& r,
                                      const std::string& dir);

}  // namespace cpm
