#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "annihilate/config.hpp"
#include "annihilate/runner.hpp"

namespace {

using annihilate::harness::Command;

struct CliState {
  std::string config_file;
  std::string from_manifest;
  std::map<std::string, std::string> overrides;
};

// Registers a pass-through option: any value the user supplies lands in the
// canonical key-value map that also backs config files and manifests.
void add_key(CLI::App* cmd, CliState& st, const std::string& key,
             const std::string& help) {
  cmd->add_option_function<std::string>(
      "--" + key, [&st, key](const std::string& v) { st.overrides[key] = v; },
      help);
}

void add_common(CLI::App* cmd, CliState& st) {
  cmd->add_option("--config", st.config_file,
                  "flat key=value config file; flags override file values");
  add_key(cmd, st, "seed", "master seed (default 1)");
  add_key(cmd, st, "workers", "worker threads (default: all cores)");
  add_key(cmd, st, "level", "confidence level (default 0.95)");
  add_key(cmd, st, "shards", "true to write replicates.jsonl");
  add_key(cmd, st, "out", "output directory (default annihilate_out)");
  add_key(cmd, st, "format", "stdout rendering: json|csv");
}

int run(Command command, const CliState& st) {
  using namespace annihilate::harness;
  std::map<std::string, std::string> file_values;
  if (!st.config_file.empty()) file_values = read_config_file(st.config_file);
  const auto plan = load_plan(command, file_values, st.overrides);
  const auto out = run_plan(plan);
  if (plan.get_string("format", "json") == "csv" && !out.table_csv.empty())
    std::cout << out.table_csv;
  else
    std::cout << out.summary.dump(2) << "\n";
  std::cerr << "wrote " << out.out_dir << "/{summary.json, manifest.json";
  if (!out.table_csv.empty()) std::cerr << ", curve.csv";
  if (!out.shards_jsonl.empty()) std::cerr << ", replicates.jsonl";
  std::cerr << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "annihilate: exact event-driven simulation and analysis of bullet "
      "processes and ballistic annihilation"};
  app.require_subcommand(0, 1);

  CliState st;
  app.add_option("--from-manifest", st.from_manifest,
                 "re-run the experiment recorded in a manifest.json");

  struct Sub {
    Command command;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  const auto sub = [&](Command c, const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, st);
    subs.push_back({c, s});
    return s;
  };

  {
    auto* s = sub(Command::Simulate, "simulate",
                  "run one explicit bullet configuration to a horizon");
    add_key(s, st, "speeds", "bullet speeds in firing order, e.g. 1,3/2,3");
    add_key(s, st, "spacing", "unit or exp:RATE");
    add_key(s, st, "horizons", "single horizon (omit to run to quiescence)");
  }
  {
    auto* s = sub(Command::Survival, "survival",
                  "censored survival curve for bullet 1");
    add_key(s, st, "speeds", "support speeds (omit or u01 for uniform(0,1))");
    add_key(s, st, "probs", "atom probabilities (default uniform)");
    add_key(s, st, "first-speed", "force bullet 1's speed");
    add_key(s, st, "spacing", "unit or exp:RATE");
    add_key(s, st, "horizons", "ascending horizons, e.g. 100,1000,10000");
    add_key(s, st, "reps", "replicates (default 10000)");
  }
  {
    auto* s = sub(Command::TwoSided, "two-sided",
                  "two-sided survival of the center bullet");
    add_key(s, st, "speeds", "support speeds");
    add_key(s, st, "probs", "atom probabilities (default uniform)");
    add_key(s, st, "first-speed", "force the center bullet's speed");
    add_key(s, st, "spacing", "unit or exp:RATE");
    add_key(s, st, "window", "window half-width m (default 1000)");
    add_key(s, st, "reps", "replicates (default 10000)");
  }
  {
    auto* s = sub(Command::Qn, "qn", "exact survivor-count distribution");
    add_key(s, st, "n", "number of bullets");
    add_key(s, st, "reps",
            "also sample the empirical distribution with this many reps");
  }
  {
    auto* s = sub(Command::Nazarov, "nazarov",
                  "P[no survivors among 2m bullets], exact product");
    add_key(s, st, "m", "half the number of bullets");
  }
  {
    auto* s = sub(Command::Oracle, "oracle",
                  "exact first-bullet survival by enumeration");
    add_key(s, st, "speeds", "support speeds");
    add_key(s, st, "probs", "atom probabilities (default uniform)");
    add_key(s, st, "first-speed", "bullet 1's speed (required)");
    add_key(s, st, "n", "number of bullets");
    add_key(s, st, "horizons", "single horizon");
    add_key(s, st, "guard", "max enumerated configurations (default 1e7)");
    add_key(s, st, "reps", "also cross-check with a Monte Carlo estimate");
  }
  {
    auto* s = sub(Command::Window, "window",
                  "collision point and window of dependence");
    add_key(s, st, "speeds", "support speeds (with --m)");
    add_key(s, st, "m", "window parameter m >= 2");
    add_key(s, st, "catcher-speed", "explicit spec: catcher speed");
    add_key(s, st, "caught-speed", "explicit spec: caught speed");
    add_key(s, st, "catcher-index", "explicit spec: catcher index i");
    add_key(s, st, "caught-index", "explicit spec: caught index j");
    add_key(s, st, "max-speed", "explicit spec: maximal speed s1");
  }
  {
    auto* s = sub(Command::Epsilon, "epsilon",
                  "shield-event probability epsilon(S, mu)");
    add_key(s, st, "speeds", "support speeds (>= 3)");
    add_key(s, st, "probs", "atom probabilities (default uniform)");
  }
  {
    auto* s = sub(Command::Threshold, "threshold",
                  "numeric survival threshold for the symmetric 3-speed law");
    add_key(s, st, "mode", "unit or expo");
    add_key(s, st, "width", "bisection bracket width (default 1e-6)");
  }
  {
    auto* s = sub(Command::Walk, "walk", "lazy biased walk return analysis");
    add_key(s, st, "left", "left-step probability");
    add_key(s, st, "right", "right-step probability");
    add_key(s, st, "lazy", "stay probability");
    add_key(s, st, "max-steps", "simulation step cap (default 10000)");
    add_key(s, st, "reps", "replicates (default 100000)");
  }
  {
    auto* s = sub(Command::Operator, "operator",
                  "iterate the recursive-inequality operator");
    add_key(s, st, "p1", "mass of the fastest speed");
    add_key(s, st, "p2", "mass of the second fastest speed");
    add_key(s, st, "eps", "shield-event probability");
    add_key(s, st, "iters", "iterations (default 1000)");
    add_key(s, st, "trunc", "support truncation K (default 1000)");
  }
  {
    auto* s = sub(Command::Ballistic, "ballistic",
                  "speed-0 survival in symmetric 3-speed annihilation");
    add_key(s, st, "p", "speed-0 particle density, in (0,1]");
    add_key(s, st, "window", "window half-width m (default 1000)");
    add_key(s, st, "spacing", "unit or exp:1 (Poisson positions)");
    add_key(s, st, "reps", "replicates (default 10000)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (!st.from_manifest.empty()) {
      const auto plan = annihilate::harness::plan_from_manifest(st.from_manifest);
      const auto out = annihilate::harness::run_plan(plan);
      std::cout << out.summary.dump(2) << "\n";
      return 0;
    }
    for (const auto& s : subs)
      if (s.app->parsed()) return run(s.command, st);
    std::cerr << app.help();
    return 2;
  } catch (const annihilate::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const annihilate::harness::GuardError& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const annihilate::harness::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
