#pragma once

#include <string>

#include <json.hpp>

#include "annihilate/config.hpp"

namespace annihilate::harness {

struct RunOutputs {
  nlohmann::json summary;
  nlohmann::json manifest;
  std::string table_csv;       // empty when the command has no tabular data
  std::string shards_jsonl;    // empty unless shards=true
  std::string out_dir;
};

// Executes the plan and writes summary.json, manifest.json, curve.csv (for
// tabular commands) and replicates.jsonl (when shards=true) under the plan's
// out directory. Data files are byte-deterministic for a fixed plan and
// seed regardless of worker count; the manifest additionally records wall
// time, which is inherently volatile.
RunOutputs run_plan(const ExperimentPlan& plan);

// Reconstructs a plan from a manifest's embedded config block.
ExperimentPlan plan_from_manifest(const std::string& manifest_path);

}  // namespace annihilate::harness
