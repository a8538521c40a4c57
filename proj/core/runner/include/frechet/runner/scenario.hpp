#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frechet/rng.hpp"
#include "frechet/runner/config.hpp"

namespace frechet::runner {

enum class Verdict { kPass, kFail, kInconclusive };
std::string_view to_string(Verdict v);
/// 0 pass, 1 fail, 2 inconclusive.
int exit_code(Verdict v);
inline constexpr int kConfigErrorExit = 3;

/// One pass/fail comparison `value <relation> limit`.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", ">=", "==", "<"
  bool passed = false;
};

/// Column-major-free plain table written as `<file>.csv`.
struct Table {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  std::string scenario;
  Verdict verdict = Verdict::kPass;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; never written to CSV
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Check> checks;
  std::deque<Table> tables;  // deque keeps references from table() valid
  std::vector<std::string> notes;
  bool inconclusive = false;

  void metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
  bool check_le(std::string name, double value, double limit);
  bool check_ge(std::string name, double value, double limit);
  bool check_lt(std::string name, double value, double limit);
  bool check_eq(std::string name, double value, double expected);
  bool check_true(std::string name, bool ok);
  Table& table(std::string file, std::vector<std::string> columns);
  std::optional<double> find_metric(std::string_view name) const;
  const Check* find_check(std::string_view name) const;
};

struct ScenarioContext {
  const Config& config;
  std::string section;  // the scenario's own config section
  std::uint64_t seed = 0;
  std::optional<std::size_t> grid;  // --grid override
  std::optional<std::size_t> dim;   // --dim override
  Rng rng;

  double get(const std::string& key, double fallback) const { return config.get_double(section, key, fallback); }
  long get_int(const std::string& key, long fallback) const { return config.get_int(section, key, fallback); }
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
    return config.get_list(section, key, fallback);
  }
  std::size_t dimension(std::size_t fallback) const;
  std::size_t grid_size(std::size_t fallback) const;
  /// [space] keys, then the scenario section, then --dim, over `fallback`.
  GradedSpace space(const GradedSpace& fallback) const;
};

struct Scenario {
  std::string name;
  std::string summary;
  std::vector<std::string> modules;
  int criterion = 0;  // acceptance criterion exercised, 0 for none
  std::function<void(ScenarioContext&, RunReport&)> run;
};

class Registry {
 public:
  void add(Scenario s);
  const Scenario* find(std::string_view name) const;
  /// Registration order.
  const std::vector<Scenario>& all() const noexcept { return scenarios_; }
  const Scenario* for_criterion(int criterion) const;

 private:
  std::vector<Scenario> scenarios_;
};

/// Every built-in scenario.
const Registry& builtin_registry();

struct RunOptions {
  std::uint64_t seed = 0x5eed;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> dim;
};

/// Runs a registered scenario. Unknown names and malformed configuration throw
/// Error(kConfig); numeric errors inside the scenario become verdict fail with
/// the message recorded as a note, and LiftStall becomes inconclusive.
RunReport run_scenario(const Registry& registry, std::string_view name, const Config& config,
                       const RunOptions& options = {});

/// Writes `<out_dir>/<scenario>/{metrics,checks}.csv` and every table; returns
/// the paths written. Doubles use %.17g.
std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::filesystem::path& out_dir);

std::string format_double(double v);

}  // namespace frechet::runner
