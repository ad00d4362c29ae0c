#pragma once

#include "taillab/cluster_lab.hpp"
#include "taillab/identities.hpp"
#include "taillab/max_stable.hpp"

#include <string>
#include <vector>

namespace taillab {

inline constexpr const char* kVersion = "taillab 0.1.0";

/// One comparison row: two sides, their stderrs, the discrepancy in combined
/// stderrs, and the verdict at the configured tolerance.
struct CheckRow {
  std::string suite;
  std::string check;
  double side_a = 0.0;
  double side_b = 0.0;
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double sigmas = 0.0;
  bool pass = false;
};

struct ExperimentConfig {
  std::string model_spec = "iid:alpha=1.5";
  std::string suite = "all";
  std::uint64_t n = 50'000;
  std::uint64_t seed = 1;
  unsigned lanes = 4;
  double tol = 3.0;
  std::string out = "taillab_results";
  std::string format = "csv";
  std::vector<std::string> notes;  // filled while running
};

const std::vector<std::string>& suite_names();

/// `name:key=value,...` grammar (lists use `;`), or `@file.json`.
SpectralModel parse_model(const std::string& spec);

/// parse_model plus the construction-time time-change certificate for
/// user-shaped laws (deterministic, empirical).
SpectralModel load_model(const std::string& spec, unsigned lanes,
                         std::uint64_t seed);

std::vector<CheckRow> run_suite(const std::string& suite, const SpectralModel& model,
                                ExperimentConfig& cfg);

CheckRow row_from_pair(const std::string& suite, const std::string& check,
                       const Estimate& a, const Estimate& b, double tol);
std::vector<CheckRow> rows_from_report(const std::string& suite,
                                       const IdentityReport& rep);

/// With a config, a `# taillab ...` provenance comment precedes the header.
std::string render_csv(const std::vector<CheckRow>& rows,
                       const ExperimentConfig* cfg = nullptr);
std::string render_json(const ExperimentConfig& cfg,
                        const std::vector<CheckRow>& rows);

/// Kolmogorov-Smirnov statistic of a sample against a cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// One-sided critical value at level 1e-3 is 1.9495/sqrt(n).
double ks_critical(std::size_t n, double level = 1e-3);

}  // namespace taillab
