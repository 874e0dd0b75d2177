#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "executor/report.hpp"

namespace foamagent::eval {

/// Unbiased pass@k = 1 - C(n-c, k) / C(n, k). Throws InvalidInput unless
/// n >= 1, 0 <= c <= n, 1 <= k <= n.
double pass_at_k(std::int64_t n, std::int64_t c, std::int64_t k);

/// Tokens per generated input-file line. Throws ZeroLines when lines <= 0.
double productivity(double total_tokens, double total_lines);

/// Sample Pearson correlation. Throws LengthMismatch, InvalidInput (fewer
/// than two points), ConstantSeries.
double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys);

struct RunRecord {
  int score = 0;
  int iterations = 0;
  std::uint64_t total_tokens = 0;
  std::size_t total_lines = 0;
  std::size_t file_count = 0;
};

struct CaseRuns {
  std::string case_id;
  std::vector<RunRecord> runs;
};

struct CaseRow {
  std::string case_id;
  int n = 0;
  int c = 0;  // runs reaching level 4
  double executability = 0.0;
  double tokens = 0.0;
  double iterations = 0.0;
  double file_count = 0.0;
  double total_lines = 0.0;
  std::optional<double> productivity;
  double pass_at_k = 0.0;
};

struct MetricsReport {
  int k = 1;
  double price_per_million = 5.0;
  std::vector<CaseRow> rows;
  CaseRow aggregate;
  double cost_per_case = 0.0;  // aggregate token mean priced
  std::optional<double> iteration_token_r;
};

/// Per-case means and pass@k, the mean row across cases, the priced token
/// mean and Pearson r of iterations vs tokens over the case rows.
/// Throws InconsistentN, InvalidInput, EmptyManifest (no cases).
MetricsReport aggregate_report(const std::vector<CaseRuns>& cases, double price_per_million, int k);

nlohmann::json report_to_json(const MetricsReport& report);
std::string report_to_text(const MetricsReport& report);

struct BenchmarkCase {
  std::string case_id;
  std::string requirement;
  std::string expected_tutorial;
  std::vector<executor::RequirementCheck> checks;
};

struct Manifest {
  std::string name;
  std::vector<BenchmarkCase> cases;
};

std::vector<executor::RequirementCheck> parse_checks(const nlohmann::json& doc);
nlohmann::json checks_to_json(const std::vector<executor::RequirementCheck>& checks);

/// Throws ConfigError for malformed documents or duplicate case ids.
Manifest parse_manifest(const nlohmann::json& doc);
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace foamagent::eval
