#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "frechet/error.hpp"
#include "frechet/runner/scenario.hpp"

namespace fr = frechet::runner;

namespace {

struct Flags {
  std::string config_path;
  std::uint64_t seed = fr::RunOptions{}.seed;
  std::string out_dir = "frechet-out";
  std::size_t grid = 0;
  std::size_t dim = 0;
  std::size_t jobs = 0;
};

fr::Config load_config(const Flags& f) {
  return f.config_path.empty() ? fr::Config{} : fr::Config::load(f.config_path);
}

fr::RunOptions run_options(const Flags& f) {
  fr::RunOptions o;
  o.seed = f.seed;
  if (f.grid) o.grid = f.grid;
  if (f.dim) o.dim = f.dim;
  return o;
}

void print_report(const fr::RunReport& r) {
  std::printf("scenario %s: %s (seed %llu, %.3f s)\n", r.scenario.c_str(), std::string(fr::to_string(r.verdict)).c_str(),
              static_cast<unsigned long long>(r.seed), r.wall_time);
  for (const auto& [k, v] : r.metrics) std::printf("  %-52s %s\n", k.c_str(), fr::format_double(v).c_str());
  for (const fr::Check& c : r.checks) {
    std::printf("  [%s] %s: %s %s %s\n", c.passed ? "ok" : "FAIL", c.name.c_str(), fr::format_double(c.value).c_str(),
                c.relation.c_str(), fr::format_double(c.limit).c_str());
  }
  for (const std::string& n : r.notes) std::printf("  note: %s\n", n.c_str());
}

int cmd_list() {
  for (const fr::Scenario& s : fr::builtin_registry().all()) {
    std::string mods;
    for (const std::string& m : s.modules) mods += (mods.empty() ? "" : ",") + m;
    std::printf("%-36s %-3s %-44s %s\n", s.name.c_str(), s.criterion ? std::to_string(s.criterion).c_str() : "-",
                mods.c_str(), s.summary.c_str());
  }
  return 0;
}

int cmd_run(const Flags& f, const std::string& name, bool quiet) {
  const fr::RunReport r = fr::run_scenario(fr::builtin_registry(), name, load_config(f), run_options(f));
  const auto paths = fr::emit_report(r, f.out_dir);
  if (quiet) {
    for (const auto& p : paths) std::printf("%s\n", p.string().c_str());
  } else {
    print_report(r);
  }
  return fr::exit_code(r.verdict);
}

int cmd_verify_all(const Flags& f) {
  const fr::Config config = load_config(f);
  const auto& scenarios = fr::builtin_registry().all();
  std::vector<fr::RunReport> reports(scenarios.size());
  std::vector<std::string> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(scenarios.size(), f.jobs ? f.jobs : std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < scenarios.size();) {
        try {
          reports[i] = fr::run_scenario(fr::builtin_registry(), scenarios[i].name, config, run_options(f));
          fr::emit_report(reports[i], f.out_dir);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();

  bool any_error = false;
  bool any_fail = false;
  bool any_inconclusive = false;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!errors[i].empty()) {
      std::printf("%-36s error  %s\n", scenarios[i].name.c_str(), errors[i].c_str());
      any_error = true;
      continue;
    }
    const fr::RunReport& r = reports[i];
    std::printf("%-36s %-12s %.3f s\n", r.scenario.c_str(), std::string(fr::to_string(r.verdict)).c_str(), r.wall_time);
    if (r.verdict == fr::Verdict::kFail) {
      for (const fr::Check& c : r.checks) {
        if (!c.passed) std::printf("    failed: %s (%s %s %s)\n", c.name.c_str(), fr::format_double(c.value).c_str(),
                                   c.relation.c_str(), fr::format_double(c.limit).c_str());
      }
      for (const std::string& n : r.notes) std::printf("    note: %s\n", n.c_str());
    }
    any_fail = any_fail || r.verdict == fr::Verdict::kFail;
    any_inconclusive = any_inconclusive || r.verdict == fr::Verdict::kInconclusive;
  }
  if (any_error) return fr::kConfigErrorExit;
  if (any_fail) return fr::exit_code(fr::Verdict::kFail);
  if (any_inconclusive) return fr::exit_code(fr::Verdict::kInconclusive);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frechet: scenarios for metric estimates, contractions and inverse functions on Frechet spaces"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "key = value configuration file with [sections]");
    sub->add_option("--seed", f.seed, "seed of every sampling routine");
    sub->add_option("--out-dir", f.out_dir, "directory for CSV output");
    sub->add_option("--grid", f.grid, "curve grid size override");
    sub->add_option("--dim", f.dim, "truncation dimension override");
  };
  std::string name;
  CLI::App* run = app.add_subcommand("run", "run one scenario, print its report and write CSV files");
  run->add_option("name", name, "scenario name")->required();
  add_common(run);
  CLI::App* emit = app.add_subcommand("emit", "run one scenario and write its CSV files, printing the paths");
  emit->add_option("name", name, "scenario name")->required();
  add_common(emit);
  CLI::App* verify = app.add_subcommand("verify-all", "run every scenario in a worker pool");
  add_common(verify);
  verify->add_option("--jobs", f.jobs, "worker threads (default: hardware concurrency)");
  app.add_subcommand("list", "list registered scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fr::kConfigErrorExit;
  }
  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("run")) return cmd_run(f, name, false);
    if (app.got_subcommand("emit")) return cmd_run(f, name, true);
    if (app.got_subcommand("verify-all")) return cmd_verify_all(f);
  } catch (const frechet::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == frechet::ErrorKind::kIo ? 1 : fr::kConfigErrorExit;
  }
  return 0;
}
