#pragma once

// Column-wise comparison of two run CSVs on a shared sample grid.
//
// Tolerance spec: comma-separated "<column glob>=abs:<v>" or "=rel:<v>";
// the last matching entry wins and unmatched columns are skipped. The
// default is "*=abs:1e-9". Columns present in only one run read as zero.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dce3 {

struct CsvTable {
  std::string source;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // -1 when absent.
  int column(std::string_view name) const;
};

CsvTable read_csv_table(const std::filesystem::path& path);
CsvTable parse_csv_table(std::string_view text, std::string source = "<memory>");

// A run path may name the CSV, its JSON sidecar, or the common stem.
std::filesystem::path resolve_run_csv(const std::filesystem::path& run);

struct Tolerance {
  enum class Kind { Abs, Rel };
  std::string pattern = "*";
  Kind kind = Kind::Abs;
  double value = 1e-9;
};

std::vector<Tolerance> parse_tolerances(std::string_view spec);

struct CompareOptions {
  std::vector<Tolerance> tolerances;
  std::optional<std::pair<double, double>> window;  // eps_t range, inclusive
};

struct ColumnReport {
  std::string name;
  double max_abs = 0.0;
  double max_rel = 0.0;  // |a-b| / max(|a|,|b|), 0 when both vanish
  Tolerance tolerance;
  bool pass = true;
};

struct ComparisonReport {
  std::string run_a;
  std::string run_b;
  std::size_t rows_compared = 0;
  std::vector<ColumnReport> columns;
  bool pass = true;
};

// Throws ComparisonError when the grids differ.
ComparisonReport compare_tables(const CsvTable& a, const CsvTable& b, const CompareOptions& options);
ComparisonReport compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                              const CompareOptions& options);

std::string format_report(const ComparisonReport& report);

}  // namespace dce3
