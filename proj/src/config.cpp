#include "annihilate/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace annihilate::harness {

namespace {

struct CommandInfo {
  Command command;
  const char* name;
  std::vector<std::string> keys;  // command-specific keys
};

const std::vector<std::string> kCommonKeys = {
    "out", "format", "seed", "workers", "level", "shards",
};

const std::array<CommandInfo, 12>& command_table() {
  static const std::array<CommandInfo, 12> table = {{
      {Command::Simulate, "simulate", {"speeds", "spacing", "horizons"}},
      {Command::Survival,
       "survival",
       {"speeds", "probs", "first-speed", "spacing", "horizons", "reps"}},
      {Command::TwoSided,
       "two-sided",
       {"speeds", "probs", "first-speed", "spacing", "window", "reps"}},
      {Command::Qn, "qn", {"n", "reps"}},
      {Command::Nazarov, "nazarov", {"m"}},
      {Command::Oracle,
       "oracle",
       {"speeds", "probs", "first-speed", "n", "horizons", "guard", "reps"}},
      {Command::Window,
       "window",
       {"speeds", "m", "catcher-speed", "caught-speed", "catcher-index",
        "caught-index", "max-speed"}},
      {Command::Epsilon, "epsilon", {"speeds", "probs"}},
      {Command::Threshold, "threshold", {"mode", "width"}},
      {Command::Walk, "walk", {"left", "right", "lazy", "max-steps", "reps"}},
      {Command::Operator, "operator", {"p1", "p2", "eps", "iters", "trunc"}},
      {Command::Ballistic, "ballistic", {"p", "window", "spacing", "reps"}},
  }};
  return table;
}

const CommandInfo& info_for(Command c) {
  for (const auto& e : command_table())
    if (e.command == c) return e;
  throw std::logic_error("unknown command enum");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

const char* command_name(Command c) { return info_for(c).name; }

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& e : command_table())
    if (name == e.name) return e.command;
  return std::nullopt;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentPlan::ExperimentPlan(Command command,
                               std::map<std::string, std::string> params)
    : command_(command), params_(std::move(params)) {}

std::string ExperimentPlan::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto it = params_.find(key);
  return it == params_.end() ? fallback : it->second;
}

std::uint64_t ExperimentPlan::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  auto it = params_.find(key);
  if (it == params_.end()) return fallback;
  std::uint64_t v = 0;
  const auto* first = it->second.data();
  const auto* last = first + it->second.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" +
                      it->second + "'");
  return v;
}

std::int64_t ExperimentPlan::get_i64(const std::string& key,
                                     std::int64_t fallback) const {
  auto it = params_.find(key);
  if (it == params_.end()) return fallback;
  std::int64_t v = 0;
  const auto* first = it->second.data();
  const auto* last = first + it->second.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    throw ConfigError("key '" + key + "': expected an integer, got '" +
                      it->second + "'");
  return v;
}

double ExperimentPlan::get_double(const std::string& key,
                                  double fallback) const {
  auto it = params_.find(key);
  if (it == params_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" +
                      it->second + "'");
  }
}

bool ExperimentPlan::get_bool(const std::string& key, bool fallback) const {
  auto it = params_.find(key);
  if (it == params_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" +
                    it->second + "'");
}

Rational ExperimentPlan::get_rational(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end())
    throw ConfigError("missing required key '" + key + "'");
  auto r = Rational::parse(it->second);
  if (!r)
    throw ConfigError("key '" + key + "': expected a rational like 3/2, got '" +
                      it->second + "'");
  return *r;
}

std::optional<Rational> ExperimentPlan::get_rational_opt(
    const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_rational(key);
}

std::vector<Rational> ExperimentPlan::get_rational_list(
    const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end())
    throw ConfigError("missing required key '" + key + "'");
  std::vector<Rational> out;
  for (const auto& tok : split(it->second, ',')) {
    auto r = Rational::parse(tok);
    if (!r)
      throw ConfigError("key '" + key + "': expected rationals, got '" + tok +
                        "'");
    out.push_back(*r);
  }
  return out;
}

SpacingModel ExperimentPlan::get_spacing() const {
  const std::string s = get_string("spacing", "unit");
  if (s == "unit") return SpacingModel::unit();
  if (s.rfind("exp:", 0) == 0) {
    auto rate = Rational::parse(s.substr(4));
    if (rate && rate->sign() > 0)
      return SpacingModel::exponential(rate->to_double());
  }
  throw ConfigError("key 'spacing': expected unit or exp:RATE, got '" + s + "'");
}

SpeedLaw ExperimentPlan::get_speed_law() const {
  if (!has("speeds") || get_string("speeds", "") == "u01")
    return SpeedLaw::uniform01();
  const auto speeds = get_rational_list("speeds");
  std::vector<Rational> probs;
  if (has("probs")) {
    probs = get_rational_list("probs");
    if (probs.size() != speeds.size())
      throw ConfigError("key 'probs': needs one probability per speed");
  } else {
    probs.assign(speeds.size(),
                 Rational(1, static_cast<long long>(speeds.size())));
  }
  Rational total(0);
  for (const auto& p : probs) {
    if (p.sign() < 0) throw ConfigError("key 'probs': probabilities must be >= 0");
    total += p;
  }
  if (total != Rational(1)) throw ConfigError("probabilities must sum to 1");
  std::vector<std::pair<Rational, Rational>> atoms;
  for (std::size_t i = 0; i < speeds.size(); ++i)
    atoms.emplace_back(speeds[i], probs[i]);
  try {
    return SpeedLaw::atomic(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string ExperimentPlan::canonical_text() const {
  std::ostringstream os;
  os << "command=" << command_name(command_) << "\n";
  for (const auto& [k, v] : params_) os << k << "=" << v << "\n";
  return os.str();
}

std::string ExperimentPlan::config_hash() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_text())));
  return buf;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config_text(os.str());
}

ExperimentPlan load_plan(Command command,
                         const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> merged = file_values;
  for (const auto& [k, v] : overrides) merged[k] = v;

  const auto& info = info_for(command);
  for (const auto& [k, v] : merged) {
    const bool known =
        std::find(info.keys.begin(), info.keys.end(), k) != info.keys.end() ||
        std::find(kCommonKeys.begin(), kCommonKeys.end(), k) !=
            kCommonKeys.end();
    if (!known)
      throw ConfigError("unknown key '" + k + "' for command '" +
                        std::string(info.name) + "'");
  }
  return ExperimentPlan(command, std::move(merged));
}

}  // namespace annihilate::harness
