#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "annihilate/process.hpp"
#include "annihilate/rational.hpp"

namespace annihilate::harness {

// Exit-code taxonomy: 2 config, 3 numeric guard, 4 I/O.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command {
  Simulate,
  Survival,
  TwoSided,
  Qn,
  Nazarov,
  Oracle,
  Window,
  Epsilon,
  Threshold,
  Walk,
  Operator,
  Ballistic,
};

const char* command_name(Command c);
std::optional<Command> parse_command(const std::string& name);

// A validated experiment: the command plus its canonical key-value
// parameters. Typed accessors re-parse from the canonical strings so the
// manifest's config block is the single source of truth.
class ExperimentPlan {
 public:
  ExperimentPlan(Command command, std::map<std::string, std::string> params);

  Command command() const { return command_; }
  const std::map<std::string, std::string>& params() const { return params_; }

  bool has(const std::string& key) const { return params_.contains(key); }
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::int64_t get_i64(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Rational get_rational(const std::string& key) const;
  std::optional<Rational> get_rational_opt(const std::string& key) const;
  std::vector<Rational> get_rational_list(const std::string& key) const;
  SpacingModel get_spacing() const;

  // speeds= and probs= (uniform over speeds when probs is absent).
  SpeedLaw get_speed_law() const;

  // Canonical flat text ("key=value" lines, sorted, command included) and
  // its FNV-1a 64 hash; identical plans hash identically.
  std::string canonical_text() const;
  std::string config_hash() const;

 private:
  Command command_;
  std::map<std::string, std::string> params_;
};

// Flat key-value config file: one `key=value` per line, '#' comments, UTF-8.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

// Merge file values with CLI overrides (overrides win) and validate against
// the command's schema.
ExperimentPlan load_plan(Command command,
                         const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& overrides);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace annihilate::harness
