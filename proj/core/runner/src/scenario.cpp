#include "frechet/runner/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "frechet/continuation.hpp"
#include "frechet/error.hpp"

namespace frechet::runner {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kPass: return 0;
    case Verdict::kFail: return 1;
    case Verdict::kInconclusive: return 2;
  }
  return 1;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool push(RunReport& r, std::string name, double value, double limit, const char* rel, bool ok) {
  r.checks.push_back(Check{std::move(name), value, limit, rel, ok});
  return ok;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

bool RunReport::check_le(std::string name, double value, double limit) {
  return push(*this, std::move(name), value, limit, "<=", value <= limit);
}
bool RunReport::check_ge(std::string name, double value, double limit) {
  return push(*this, std::move(name), value, limit, ">=", value >= limit);
}
bool RunReport::check_lt(std::string name, double value, double limit) {
  return push(*this, std::move(name), value, limit, "<", value < limit);
}
bool RunReport::check_eq(std::string name, double value, double expected) {
  return push(*this, std::move(name), value, expected, "==", value == expected);
}
bool RunReport::check_true(std::string name, bool ok) {
  return push(*this, std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok);
}

Table& RunReport::table(std::string file, std::vector<std::string> columns) {
  tables.push_back(Table{std::move(file), std::move(columns), {}});
  return tables.back();
}

std::optional<double> RunReport::find_metric(std::string_view name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::nullopt;
}

const Check* RunReport::find_check(std::string_view name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::size_t ScenarioContext::dimension(std::size_t fallback) const {
  if (dim) return *dim;
  return static_cast<std::size_t>(config.get_int(section, "dim", config.get_int("space", "dim", static_cast<long>(fallback))));
}

std::size_t ScenarioContext::grid_size(std::size_t fallback) const {
  if (grid) return *grid;
  return static_cast<std::size_t>(config.get_int(section, "grid_size", static_cast<long>(fallback)));
}

GradedSpace ScenarioContext::space(const GradedSpace& fallback) const {
  GradedSpace s = space_from_config(config, "space", fallback);
  s = space_from_config(config, section, s);
  if (dim && *dim != s.dim()) {
    Config c;
    c.set("d", "dim", std::to_string(*dim));
    s = space_from_config(c, "d", s);
  }
  return s;
}

void Registry::add(Scenario s) {
  if (find(s.name)) throw Error(ErrorKind::kConfig, "duplicate scenario " + s.name);
  scenarios_.push_back(std::move(s));
}

const Scenario* Registry::find(std::string_view name) const {
  for (const Scenario& s : scenarios_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const Scenario* Registry::for_criterion(int criterion) const {
  for (const Scenario& s : scenarios_) {
    if (s.criterion == criterion) return &s;
  }
  return nullptr;
}

RunReport run_scenario(const Registry& registry, std::string_view name, const Config& config,
                       const RunOptions& options) {
  const Scenario* s = registry.find(name);
  if (!s) throw Error(ErrorKind::kConfig, "unknown scenario '" + std::string(name) + "'");
  ScenarioContext ctx{config, s->name, options.seed, options.grid, options.dim, Rng(options.seed)};
  RunReport report;
  report.scenario = s->name;
  report.seed = options.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    s->run(ctx, report);
  } catch (const LiftStallError& e) {
    report.inconclusive = true;
    report.notes.emplace_back(e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    report.checks.push_back(Check{"completed without error", 0.0, 1.0, "==", false});
    report.notes.emplace_back(e.what());
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool all = true;
  for (const Check& c : report.checks) all = all && c.passed;
  report.verdict = !all ? Verdict::kFail : report.inconclusive ? Verdict::kInconclusive : Verdict::kPass;
  return report;
}

std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::filesystem::path& out_dir) {
  const std::filesystem::path dir = out_dir / report.scenario;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& file) {
    const auto p = dir / (file + ".csv");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + p.string());
    written.push_back(p);
    return out;
  };
  {
    std::ofstream out = open("metrics");
    out << "metric,value\n";
    out << "seed," << report.seed << "\n";
    out << "verdict," << to_string(report.verdict) << "\n";
    for (const auto& [k, v] : report.metrics) out << csv_field(k) << ',' << format_double(v) << '\n';
  }
  {
    std::ofstream out = open("checks");
    out << "check,value,relation,limit,passed\n";
    for (const Check& c : report.checks) {
      out << csv_field(c.name) << ',' << format_double(c.value) << ',' << c.relation << ',' << format_double(c.limit)
          << ',' << (c.passed ? 1 : 0) << '\n';
    }
  }
  for (const Table& t : report.tables) {
    std::ofstream out = open(t.file);
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
      out << '\n';
    }
  }
  return written;
}

}  // namespace frechet::runner
