// cpm solve --config <path> [--case auto|zero|one-nonzero] [--out <dir>]
//           [--format json,csv,svg] [--tol-acc <float>]
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include "cpm/analysis.hpp"
#include "cpm/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kOk = 0, kInvalid = 2, kNumerical = 3 };

int exit_code_for(cpm::ErrorCode c) {
  using cpm::ErrorCode;
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::IoError:
    case ErrorCode::NonZeroFreeLength:
    case ErrorCode::WrongFreeLengthPattern:
    case ErrorCode::OriginOnPlane:
    case ErrorCode::ParallelLines:
      return kInvalid;
    default:
      return kNumerical;
  }
}

std::vector<std::string> split_formats(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item != "json" && item != "csv" && item != "svg") {
      throw cpm::Error(cpm::ErrorCode::ValidationError, "--format: unknown format '" + item + "'");
    }
    out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium poses of a planar three-spring platform pressed against a surface"};
  app.require_subcommand(1);

  std::string config_path, case_name, out_dir, formats;
  double tol_acc = 0;
  CLI::App* solve = app.add_subcommand("solve", "solve one configuration");
  solve->add_option("--config", config_path, "JSON configuration")->required();
  solve->add_option("--case", case_name, "auto | zero | one-nonzero");
  solve->add_option("--out", out_dir, "output directory (overrides output_dir)");
  solve->add_option("--format", formats, "comma-separated subset of json,csv,svg");
  solve->add_option("--tol-acc", tol_acc, "acceptance tolerance for case ii roots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    cpm::RunConfig cfg = cpm::load_config(config_path);
    if (!case_name.empty()) {
      cfg.case_kind = cpm::parse_case(case_name);
      cpm::resolve_case(cfg.params, cfg.case_kind);
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!formats.empty()) cfg.formats = split_formats(formats);
    if (solve->count("--tol-acc")) {
      if (!(tol_acc > 0)) {
        throw cpm::Error(cpm::ErrorCode::ValidationError, "--tol-acc must be > 0");
      }
      cfg.tol_acc = tol_acc;
    }

    const cpm::AnalysisReport r = cpm::run_analysis(cfg);
    const auto files = cpm::emit_outputs(cfg, r, cfg.output_dir);

    std::printf("contact: %s\n", r.contact.c_str());
    if (r.solved) {
      std::printf("case: %s\n", cpm::to_string(r.case_used));
      std::printf("solutions: %d total, %d accepted, %d rejected, %d real\n", r.total, r.accepted,
                  r.rejected, r.real);
      if (r.case_used == cpm::CaseKind::OneNonzero) {
        std::printf("resultant degree %d, pole multiplicity %d, filter margin %.3g\n",
                    r.resultant_degree, r.pole_multiplicity, r.margin);
      }
      for (const auto& v : r.solutions) {
        if (!v.sol.is_real || !v.sol.accepted) continue;
        std::printf("  beta = % .6f  L = %.6f\n", v.sol.beta.real(), v.sol.L.real());
      }
    }
    std::printf("time: %.3f s\n", r.seconds);
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    return kOk;
  } catch (const cpm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
