#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

using nlohmann::json;

namespace foamagent::eval {

namespace {

// C(n, k) when it stays below 2^53, so every later double operation is exact
// up to a single rounding.
std::optional<std::uint64_t> small_binomial(std::int64_t n, std::int64_t k) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 53;
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r >= kLimit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double pass_at_k(std::int64_t n, std::int64_t c, std::int64_t k) {
  if (n < 1 || c < 0 || c > n || k < 1 || k > n) {
    throw Error(ErrorCode::InvalidInput, "pass@k needs n >= 1, 0 <= c <= n, 1 <= k <= n (got n=" +
                                             std::to_string(n) + ", c=" + std::to_string(c) +
                                             ", k=" + std::to_string(k) + ")");
  }
  if (n - c < k) return 1.0;
  const auto total = small_binomial(n, k);
  if (total) {
    const auto none = *small_binomial(n - c, k);
    return static_cast<double>(*total - none) / static_cast<double>(*total);
  }
  double fail_all = 1.0;
  for (std::int64_t j = 0; j < k; ++j) {
    fail_all *= static_cast<double>(n - c - j) / static_cast<double>(n - j);
  }
  return 1.0 - fail_all;
}

double productivity(double total_tokens, double total_lines) {
  if (!(total_lines > 0.0)) throw Error(ErrorCode::ZeroLines, "productivity needs a positive line count");
  return total_tokens / total_lines;
}

double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::LengthMismatch, "series lengths differ: " + std::to_string(xs.size()) +
                                               " vs " + std::to_string(ys.size()));
  }
  if (xs.size() < 2) throw Error(ErrorCode::InvalidInput, "Pearson r needs at least two points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ConstantSeries, "a series is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MetricsReport aggregate_report(const std::vector<CaseRuns>& cases, double price_per_million, int k) {
  if (cases.empty()) throw Error(ErrorCode::EmptyManifest, "no cases to aggregate");
  MetricsReport report;
  report.k = k;
  report.price_per_million = price_per_million;
  const auto n = cases.front().runs.size();
  for (const auto& cr : cases) {
    if (cr.runs.size() != n) {
      throw Error(ErrorCode::InconsistentN, "case " + cr.case_id + " has " +
                                                std::to_string(cr.runs.size()) + " runs, expected " +
                                                std::to_string(n),
                  cr.case_id);
    }
  }
  if (n == 0) throw Error(ErrorCode::InvalidInput, "cases have no runs");

  std::vector<double> exec_col, token_col, iter_col, file_col, line_col, pass_col, prod_col;
  for (const auto& cr : cases) {
    std::vector<double> scores, tokens, iters, files, lines;
    CaseRow row;
    row.case_id = cr.case_id;
    row.n = static_cast<int>(n);
    for (const auto& r : cr.runs) {
      scores.push_back(r.score);
      tokens.push_back(static_cast<double>(r.total_tokens));
      iters.push_back(r.iterations);
      files.push_back(static_cast<double>(r.file_count));
      lines.push_back(static_cast<double>(r.total_lines));
      if (r.score == 4) ++row.c;
    }
    row.executability = mean(scores);
    row.tokens = mean(tokens);
    row.iterations = mean(iters);
    row.file_count = mean(files);
    row.total_lines = mean(lines);
    if (row.total_lines > 0) row.productivity = productivity(row.tokens, row.total_lines);
    row.pass_at_k = pass_at_k(row.n, row.c, k);
    exec_col.push_back(row.executability);
    token_col.push_back(row.tokens);
    iter_col.push_back(row.iterations);
    file_col.push_back(row.file_count);
    line_col.push_back(row.total_lines);
    pass_col.push_back(row.pass_at_k);
    if (row.productivity) prod_col.push_back(*row.productivity);
    report.rows.push_back(std::move(row));
  }
  auto& agg = report.aggregate;
  agg.case_id = "Average";
  agg.n = static_cast<int>(n);
  agg.executability = mean(exec_col);
  agg.tokens = mean(token_col);
  agg.iterations = mean(iter_col);
  agg.file_count = mean(file_col);
  agg.total_lines = mean(line_col);
  if (!prod_col.empty()) agg.productivity = mean(prod_col);
  agg.pass_at_k = mean(pass_col);
  if (const auto total = small_binomial(static_cast<std::int64_t>(n), k); total && k >= 1 && k <= static_cast<int>(n)) {
    unsigned __int128 hits = 0;
    for (const auto& r : report.rows) {
      hits += *total - *small_binomial(static_cast<std::int64_t>(n) - r.c, k);
    }
    const unsigned __int128 denom = static_cast<unsigned __int128>(*total) * report.rows.size();
    if (denom < (static_cast<unsigned __int128>(1) << 53)) {
      agg.pass_at_k = static_cast<double>(static_cast<std::uint64_t>(hits)) /
                      static_cast<double>(static_cast<std::uint64_t>(denom));
    }
  }
  int c_sum = 0;
  for (const auto& r : report.rows) c_sum += r.c;
  agg.c = c_sum;
  report.cost_per_case = agg.tokens * price_per_million / 1e6;
  try {
    report.iteration_token_r = pearson_r(iter_col, token_col);
  } catch (const Error&) {
    report.iteration_token_r.reset();
  }
  return report;
}

json report_to_json(const MetricsReport& report) {
  auto row_json = [](const CaseRow& r) {
    json j = {{"case_id", r.case_id},
              {"n", r.n},
              {"c", r.c},
              {"executability", r.executability},
              {"token_usage", r.tokens},
              {"iterations", r.iterations},
              {"file_count", r.file_count},
              {"total_lines", r.total_lines},
              {"pass_at_k", r.pass_at_k}};
    j["productivity"] = r.productivity ? json(*r.productivity) : json(nullptr);
    return j;
  };
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back(row_json(r));
  json j = {{"k", report.k},
            {"rows", std::move(rows)},
            {"aggregate", row_json(report.aggregate)},
            {"cost", {{"tokens_per_case", report.aggregate.tokens},
                      {"price_per_million", report.price_per_million},
                      {"currency_per_case", report.cost_per_case}}}};
  j["correlation"] = {{"x", "iterations"},
                      {"y", "token_usage"},
                      {"pearson_r", report.iteration_token_r ? json(*report.iteration_token_r) : json(nullptr)}};
  return j;
}

std::string report_to_text(const MetricsReport& report) {
  const std::vector<std::string> header = {"Case",      "Executability", "Token Usage", "Iteration",
                                           "Productivity", "Pass@" + std::to_string(report.k) + "(%)"};
  std::vector<std::vector<std::string>> table = {header};
  auto add = [&table](const CaseRow& r) {
    table.push_back({r.case_id, fixed(r.executability, 1), fixed(r.tokens, 0), fixed(r.iterations, 1),
                     r.productivity ? fixed(*r.productivity, 1) : "-", fixed(r.pass_at_k * 100.0, 1)});
  };
  for (const auto& r : report.rows) add(r);
  add(report.aggregate);
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (r == table.size() - 1) {
      std::size_t total = 0;
      for (const auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
    for (std::size_t i = 0; i < table[r].size(); ++i) {
      const auto& cell = table[r][i];
      const auto pad = std::string(width[i] - cell.size(), ' ');
      out += i == 0 ? cell + pad : pad + cell;
      if (i + 1 < table[r].size()) out += "  ";
    }
    out += "\n";
  }
  out += "Cost per case: " + fixed(report.cost_per_case, 4) + " at " +
         fixed(report.price_per_million, 2) + " per 1M tokens\n";
  out += "Pearson r (iterations, token usage): " +
         (report.iteration_token_r ? fixed(*report.iteration_token_r, 3) : std::string("n/a")) + "\n";
  return out;
}

std::vector<executor::RequirementCheck> parse_checks(const json& doc) {
  std::vector<executor::RequirementCheck> out;
  if (doc.is_null()) return out;
  for (const auto& c : doc) {
    executor::RequirementCheck check;
    check.id = c.at("id").get<std::string>();
    check.file = c.at("file").get<std::string>();
    if (c.contains("contains")) check.contains = c["contains"].get<std::string>();
    if (c.contains("regex")) check.regex = c["regex"].get<std::string>();
    out.push_back(std::move(check));
  }
  return out;
}

json checks_to_json(const std::vector<executor::RequirementCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    json j = {{"id", c.id}, {"file", c.file}};
    if (c.contains) j["contains"] = *c.contains;
    if (c.regex) j["regex"] = *c.regex;
    out.push_back(std::move(j));
  }
  return out;
}

Manifest parse_manifest(const json& doc) {
  Manifest m;
  try {
    m.name = doc.value("name", std::string());
    std::set<std::string> ids;
    for (const auto& c : doc.at("cases")) {
      BenchmarkCase bc;
      bc.case_id = c.at("case_id").get<std::string>();
      bc.requirement = c.at("requirement").get<std::string>();
      bc.expected_tutorial = c.value("expected_tutorial", std::string());
      bc.checks = parse_checks(c.value("checks", json::array()));
      if (text::trim(bc.requirement).empty()) {
        throw Error(ErrorCode::ConfigError, "case " + bc.case_id + " has an empty requirement");
      }
      if (!ids.insert(bc.case_id).second) {
        throw Error(ErrorCode::ConfigError, "duplicate case id " + bc.case_id, bc.case_id);
      }
      m.cases.push_back(std::move(bc));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed manifest: ") + e.what());
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  try {
    return parse_manifest(json::parse(text::read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what(), path.string());
  }
}

}  // namespace foamagent::eval
