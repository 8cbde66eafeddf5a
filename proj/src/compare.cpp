#include "dce3/compare.hpp"

#include "dce3/error.hpp"

#include <fmt/format.h>
#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dce3 {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ComparisonError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

bool glob_match(const std::string& pattern, const std::string& name) {
  return fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

}  // namespace

int CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return static_cast<int>(c);
  }
  return -1;
}

CsvTable parse_csv_table(std::string_view text, std::string source) {
  CsvTable t;
  t.source = std::move(source);
  auto lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ComparisonError(fmt::format("{}: empty CSV", t.source));
  for (auto c : split(trim(lines[0]), ',')) t.columns.emplace_back(trim(c));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(trim(lines[i]), ',');
    if (cells.size() != t.columns.size()) {
      throw ComparisonError(fmt::format("{}: row {} has {} cells, header has {}", t.source, i, cells.size(),
                                        t.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_double(trim(c), t.source));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ComparisonError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_table(buf.str(), path.string());
}

std::filesystem::path resolve_run_csv(const std::filesystem::path& run) {
  namespace fs = std::filesystem;
  if (run.extension() == ".csv" && fs::is_regular_file(run)) return run;
  if (run.extension() == ".json") {
    fs::path csv = run;
    csv.replace_extension(".csv");
    if (fs::is_regular_file(csv)) return csv;
  }
  fs::path with_ext = run;
  with_ext += ".csv";
  if (fs::is_regular_file(with_ext)) return with_ext;
  throw ComparisonError(fmt::format("no run CSV found for '{}'", run.string()));
}

std::vector<Tolerance> parse_tolerances(std::string_view spec) {
  std::vector<Tolerance> out;
  spec = trim(spec);
  if (spec.empty()) return {Tolerance{}};
  for (auto item : split(spec, ',')) {
    item = trim(item);
    const auto eq = item.rfind('=');
    if (eq == std::string_view::npos) throw ComparisonError(fmt::format("tolerance '{}' needs '<glob>=kind:value'", item));
    Tolerance t;
    t.pattern = std::string(trim(item.substr(0, eq)));
    const auto rhs = trim(item.substr(eq + 1));
    const auto colon = rhs.find(':');
    if (t.pattern.empty() || colon == std::string_view::npos) {
      throw ComparisonError(fmt::format("tolerance '{}' needs '<glob>=kind:value'", item));
    }
    const auto kind = rhs.substr(0, colon);
    if (kind == "abs") {
      t.kind = Tolerance::Kind::Abs;
    } else if (kind == "rel") {
      t.kind = Tolerance::Kind::Rel;
    } else {
      throw ComparisonError(fmt::format("tolerance kind '{}' must be abs or rel", kind));
    }
    t.value = parse_double(rhs.substr(colon + 1), "tolerance");
    if (!(t.value >= 0.0)) throw ComparisonError("tolerance values must be non-negative");
    out.push_back(std::move(t));
  }
  return out;
}

ComparisonReport compare_tables(const CsvTable& a, const CsvTable& b, const CompareOptions& options) {
  const int ta = a.column("t"), tb = b.column("t");
  const int ea = a.column("eps_t"), eb = b.column("eps_t");
  if (ta < 0 || tb < 0 || ea < 0 || eb < 0) throw ComparisonError("both runs need t and eps_t columns");
  if (a.rows.size() != b.rows.size()) {
    throw ComparisonError(fmt::format("sample grids differ: {} vs {} rows", a.rows.size(), b.rows.size()));
  }
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    for (auto [ca, cb] : {std::pair{ta, tb}, std::pair{ea, eb}}) {
      const double va = a.rows[r][static_cast<std::size_t>(ca)];
      const double vb = b.rows[r][static_cast<std::size_t>(cb)];
      if (std::abs(va - vb) > 1e-12 * std::max(1.0, std::abs(va))) {
        throw ComparisonError(fmt::format("sample grids differ at row {}: {} vs {}", r, va, vb));
      }
    }
  }

  const auto tolerances = options.tolerances.empty() ? std::vector<Tolerance>{Tolerance{}} : options.tolerances;
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto* t : {&a, &b}) {
    for (const auto& c : t->columns) {
      if (c != "t" && c != "eps_t" && seen.insert(c).second) names.push_back(c);
    }
  }

  ComparisonReport report;
  report.run_a = a.source;
  report.run_b = b.source;
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const double et = a.rows[r][static_cast<std::size_t>(ea)];
    if (options.window && (et < options.window->first || et > options.window->second)) continue;
    rows.push_back(r);
  }
  report.rows_compared = rows.size();

  for (const auto& name : names) {
    const Tolerance* tol = nullptr;
    for (const auto& t : tolerances) {
      if (glob_match(t.pattern, name)) tol = &t;
    }
    if (!tol) continue;
    const int ca = a.column(name), cb = b.column(name);
    ColumnReport col;
    col.name = name;
    col.tolerance = *tol;
    for (std::size_t r : rows) {
      const double va = ca < 0 ? 0.0 : a.rows[r][static_cast<std::size_t>(ca)];
      const double vb = cb < 0 ? 0.0 : b.rows[r][static_cast<std::size_t>(cb)];
      const double diff = std::abs(va - vb);
      const double scale = std::max(std::abs(va), std::abs(vb));
      col.max_abs = std::max(col.max_abs, diff);
      if (scale > 0.0) col.max_rel = std::max(col.max_rel, diff / scale);
    }
    col.pass = (tol->kind == Tolerance::Kind::Abs ? col.max_abs : col.max_rel) <= tol->value;
    report.pass = report.pass && col.pass;
    report.columns.push_back(std::move(col));
  }
  return report;
}

ComparisonReport compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                              const CompareOptions& options) {
  return compare_tables(read_csv_table(resolve_run_csv(run_a)), read_csv_table(resolve_run_csv(run_b)), options);
}

std::string format_report(const ComparisonReport& report) {
  std::string out = fmt::format("compare {} vs {} ({} samples)\n", report.run_a, report.run_b, report.rows_compared);
  std::size_t width = 6;
  for (const auto& c : report.columns) width = std::max(width, c.name.size());
  out += fmt::format("{:<{}}  {:>12}  {:>12}  {:>14}  {}\n", "column", width, "max_abs", "max_rel", "tolerance", "result");
  for (const auto& c : report.columns) {
    const std::string tol = fmt::format("{}:{:.3g}", c.tolerance.kind == Tolerance::Kind::Abs ? "abs" : "rel",
                                        c.tolerance.value);
    out += fmt::format("{:<{}}  {:>12.4e}  {:>12.4e}  {:>14}  {}\n", c.name, width, c.max_abs, c.max_rel, tol,
                       c.pass ? "pass" : "FAIL");
  }
  out += report.pass ? "PASS\n" : "FAIL\n";
  return out;
}

}  // namespace dce3
