#include "annihilate/runner.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "annihilate/ballistic.hpp"
#include "annihilate/engine.hpp"
#include "annihilate/exact.hpp"
#include "annihilate/survival.hpp"
#include "annihilate/theory.hpp"

namespace annihilate::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kArtifactVersion = "1.0.0";

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

json estimate_json(const BinomialEstimate& e, std::uint64_t seed) {
  return json{{"point", e.point},     {"low", e.ci.low},
              {"high", e.ci.high},    {"successes", e.successes},
              {"reps", e.trials},     {"level", e.level},
              {"seed", seed}};
}

std::string estimate_csv(const BinomialEstimate& e) {
  std::ostringstream os;
  os << e.successes << "," << e.trials << "," << fmt_double(e.point) << ","
     << fmt_double(e.ci.low) << "," << fmt_double(e.ci.high);
  return os.str();
}

template <class N>
json numeric_json(const N& v) {
  if constexpr (std::is_same_v<N, Rational>)
    return v.str();
  else
    return v;
}

template <class N>
json fate_table_json(const engine::FateTable<N>& table) {
  json out;
  out["mode"] = std::is_same_v<N, Rational> ? "exact" : "continuous";
  out["horizon"] = table.horizon ? numeric_json(*table.horizon) : json();
  out["n"] = table.bullets.size();
  json bullets = json::array();
  for (std::size_t i = 0; i < table.bullets.size(); ++i) {
    const auto& b = table.bullets[i];
    json jb{{"index", b.index},
            {"fire_time", numeric_json(b.fire_time)},
            {"speed", numeric_json(b.speed)}};
    if (table.fates[i]) {
      const auto& a = *table.fates[i];
      jb["fate"] = json{{"status", "annihilated"},
                        {"time", numeric_json(a.time)},
                        {"position", numeric_json(a.position)},
                        {"group", a.group}};
    } else {
      jb["fate"] = json{{"status", "alive"}};
    }
    bullets.push_back(std::move(jb));
  }
  out["bullets"] = std::move(bullets);
  return out;
}

template <class N>
std::string numeric_csv(const N& v) {
  if constexpr (std::is_same_v<N, Rational>)
    return v.str();
  else
    return fmt_double(v);
}

template <class N>
std::string fate_table_csv(const engine::FateTable<N>& table) {
  std::ostringstream os;
  os << "index,fire_time,speed,status,time,position,group\n";
  for (std::size_t i = 0; i < table.bullets.size(); ++i) {
    const auto& b = table.bullets[i];
    os << b.index << "," << numeric_csv(b.fire_time) << ","
       << numeric_csv(b.speed) << ",";
    if (table.fates[i]) {
      const auto& a = *table.fates[i];
      os << "annihilated," << numeric_csv(a.time) << ","
         << numeric_csv(a.position) << ",";
      for (std::size_t g = 0; g < a.group.size(); ++g)
        os << (g ? "|" : "") << a.group[g];
    } else {
      os << "alive,,,";
    }
    os << "\n";
  }
  return os.str();
}

struct CommonParams {
  std::uint64_t seed;
  int workers;
  double level;
  bool shards;
};

CommonParams common_params(const ExperimentPlan& plan) {
  CommonParams c;
  c.seed = plan.get_u64("seed", 1);
  c.workers = static_cast<int>(plan.get_i64("workers", 0));
  c.level = plan.get_double("level", 0.95);
  if (!(c.level > 0.0 && c.level < 1.0))
    throw ConfigError("key 'level': must lie strictly between 0 and 1");
  c.shards = plan.get_bool("shards", false);
  return c;
}

// ---------------------------------------------------------------------------
// Command handlers: fill summary / table / shards / manifest stats.
// ---------------------------------------------------------------------------

struct HandlerOut {
  json summary;
  json stats;
  std::string csv;
  std::string shards;
};

HandlerOut do_simulate(const ExperimentPlan& plan, const CommonParams& c) {
  const auto speeds = plan.get_rational_list("speeds");
  if (speeds.empty()) throw ConfigError("key 'speeds': needs at least one speed");
  const auto spacing = plan.get_spacing();
  std::optional<Rational> horizon;
  if (plan.has("horizons")) {
    auto hs = plan.get_rational_list("horizons");
    if (hs.size() != 1)
      throw ConfigError("key 'horizons': simulate takes a single horizon");
    horizon = hs[0];
  }

  HandlerOut out;
  if (spacing.is_unit()) {
    std::vector<Bullet<Rational>> bullets;
    for (std::size_t i = 0; i < speeds.size(); ++i)
      bullets.push_back({static_cast<std::int64_t>(i) + 1,
                         Rational(static_cast<long long>(i) + 1), speeds[i]});
    auto table = engine::run<Rational>(std::move(bullets), horizon);
    out.summary["fate_table"] = fate_table_json(table);
    out.csv = fate_table_csv(table);
    out.stats = {{"alive", table.alive_count()}, {"bullets", speeds.size()}};
  } else {
    RandomStream stream(c.seed, 0);
    std::vector<Bullet<double>> bullets;
    double t = 0.0;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
      t += stream.exponential(spacing.rate);
      bullets.push_back(
          {static_cast<std::int64_t>(i) + 1, t, speeds[i].to_double()});
    }
    std::optional<double> hd;
    if (horizon) hd = horizon->to_double();
    auto table = engine::run<double>(std::move(bullets), hd);
    out.summary["fate_table"] = fate_table_json(table);
    out.csv = fate_table_csv(table);
    out.stats = {{"alive", table.alive_count()}, {"bullets", speeds.size()}};
  }
  return out;
}

HandlerOut do_survival(const ExperimentPlan& plan, const CommonParams& c) {
  const auto law = plan.get_speed_law();
  const auto spacing = plan.get_spacing();
  const auto horizons = plan.get_rational_list("horizons");
  const auto reps = plan.get_u64("reps", 10'000);
  const auto first = plan.get_rational_opt("first-speed");

  std::vector<std::uint8_t> bits;
  auto curve = engine::survival_curve(law, spacing, first, horizons, reps,
                                      c.seed, c.workers, c.level,
                                      c.shards ? &bits : nullptr);

  HandlerOut out;
  json rows = json::array();
  std::ostringstream csv;
  csv << "horizon,successes,reps,estimate,low,high\n";
  for (const auto& pt : curve) {
    json r = estimate_json(pt.estimate, c.seed);
    r["horizon"] = pt.horizon.str();
    rows.push_back(std::move(r));
    csv << pt.horizon.str() << "," << estimate_csv(pt.estimate) << "\n";
  }
  out.summary["curve"] = std::move(rows);
  out.csv = csv.str();
  out.stats = {{"reps", reps},
               {"horizons", horizons.size()},
               {"final_estimate", curve.back().estimate.point}};
  if (c.shards) {
    std::ostringstream sh;
    const std::size_t H = horizons.size();
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      json line{{"rep", rep}};
      json alive = json::array();
      for (std::size_t k = 0; k < H; ++k)
        alive.push_back(static_cast<int>(bits[rep * H + k]));
      line["alive"] = std::move(alive);
      sh << line.dump() << "\n";
    }
    out.shards = sh.str();
  }
  return out;
}

HandlerOut do_two_sided(const ExperimentPlan& plan, const CommonParams& c) {
  const auto law = plan.get_speed_law();
  const auto spacing = plan.get_spacing();
  const auto m = plan.get_i64("window", 1000);
  const auto reps = plan.get_u64("reps", 10'000);
  const auto center = plan.get_rational_opt("first-speed");

  std::vector<std::uint8_t> bits;
  auto est = engine::two_sided_estimate(law, spacing, m, center, reps, c.seed,
                                        c.workers, c.level,
                                        c.shards ? &bits : nullptr);
  HandlerOut out;
  out.summary["plus"] = estimate_json(est.plus, c.seed);
  out.summary["minus"] = estimate_json(est.minus, c.seed);
  out.summary["both"] = estimate_json(est.both, c.seed);
  const double prod = est.plus.point * est.minus.point;
  out.summary["product"] = prod;
  out.summary["product_gap"] = std::abs(est.both.point - prod);
  out.summary["window"] = m;
  std::ostringstream csv;
  csv << "side,successes,reps,estimate,low,high\n";
  csv << "plus," << estimate_csv(est.plus) << "\n";
  csv << "minus," << estimate_csv(est.minus) << "\n";
  csv << "both," << estimate_csv(est.both) << "\n";
  out.csv = csv.str();
  out.stats = {{"reps", reps}, {"window", m}, {"both", est.both.point}};
  if (c.shards) {
    std::ostringstream sh;
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      json line{{"rep", rep},
                {"plus", static_cast<int>(bits[rep * 3 + 0])},
                {"minus", static_cast<int>(bits[rep * 3 + 1])},
                {"both", static_cast<int>(bits[rep * 3 + 2])}};
      sh << line.dump() << "\n";
    }
    out.shards = sh.str();
  }
  return out;
}

HandlerOut do_qn(const ExperimentPlan& plan, const CommonParams& c) {
  const auto n = plan.get_u64("n", 0);
  if (!plan.has("n")) throw ConfigError("missing required key 'n'");
  if (n > 5000)
    throw GuardError("key 'n': the exact recurrence is guarded at n <= 5000");
  const auto dist = exact::qn(static_cast<std::size_t>(n));

  HandlerOut out;
  json mass = json::object();
  std::ostringstream csv;
  csv << "k,mass\n";
  for (std::size_t k = 0; k <= dist.n; ++k) {
    if (dist.mass[k].is_zero()) continue;
    mass[std::to_string(k)] = dist.mass[k].str();
    csv << k << "," << dist.mass[k].str() << "\n";
  }
  out.summary["n"] = n;
  out.summary["mass"] = std::move(mass);
  out.csv = csv.str();
  out.stats = {{"n", n}};

  if (plan.has("reps")) {
    const auto reps = plan.get_u64("reps", 0);
    auto emp = exact::qn_empirical(static_cast<std::size_t>(n), reps, c.seed,
                                   c.workers);
    json counts = json::array();
    for (auto v : emp.counts) counts.push_back(v);
    out.summary["empirical"] = {{"reps", reps},
                                {"counts", std::move(counts)},
                                {"seed", c.seed},
                                {"total_variation", emp.total_variation(dist)}};
    out.stats["total_variation"] = emp.total_variation(dist);
  }
  return out;
}

HandlerOut do_nazarov(const ExperimentPlan& plan, const CommonParams&) {
  if (!plan.has("m")) throw ConfigError("missing required key 'm'");
  const auto m = plan.get_u64("m", 0);
  if (m < 1 || m > 100'000)
    throw GuardError("key 'm': must lie in [1, 100000]");
  const auto value = exact::nazarov(static_cast<std::size_t>(m));
  HandlerOut out;
  out.summary["m"] = m;
  out.summary["value"] = value.str();
  out.summary["value_double"] = value.to_double();
  out.csv = "m,value\n" + std::to_string(m) + "," + value.str() + "\n";
  out.stats = {{"m", m}, {"value", value.str()}};
  return out;
}

HandlerOut do_oracle(const ExperimentPlan& plan, const CommonParams& c) {
  const auto law = plan.get_speed_law();
  if (!law.is_atomic())
    throw ConfigError("key 'speeds': the oracle needs an atomic law");
  const auto first = plan.get_rational("first-speed");
  if (!plan.has("n")) throw ConfigError("missing required key 'n'");
  const auto n = plan.get_u64("n", 0);
  auto horizons = plan.get_rational_list("horizons");
  if (horizons.size() != 1)
    throw ConfigError("key 'horizons': oracle takes a single horizon");
  const auto guard = plan.get_u64("guard", 10'000'000);

  Rational exact_value;
  try {
    exact_value = exact::brute_force_first_survival(
        law, first, static_cast<std::size_t>(n), horizons[0], guard,
        c.workers);
  } catch (const exact::EnumerationGuard& e) {
    throw GuardError(e.what());
  }

  HandlerOut out;
  out.summary["exact"] = exact_value.str();
  out.summary["exact_double"] = exact_value.to_double();
  out.summary["n"] = n;
  out.summary["horizon"] = horizons[0].str();
  out.csv = "n,horizon,exact\n" + std::to_string(n) + "," + horizons[0].str() +
            "," + exact_value.str() + "\n";
  out.stats = {{"exact", exact_value.str()}};

  if (plan.has("reps")) {
    const auto reps = plan.get_u64("reps", 0);
    auto curve = engine::survival_curve(law, plan.get_spacing(), first,
                                        horizons, reps, c.seed, c.workers,
                                        c.level);
    const auto& est = curve[0].estimate;
    out.summary["monte_carlo"] = estimate_json(est, c.seed);
    out.summary["within_interval"] =
        est.ci.low <= exact_value.to_double() &&
        exact_value.to_double() <= est.ci.high;
  }
  return out;
}

HandlerOut do_window(const ExperimentPlan& plan, const CommonParams&) {
  HandlerOut out;
  theory::WindowSpec spec;
  if (plan.has("speeds") && plan.has("m")) {
    const auto speeds = plan.get_rational_list("speeds");
    const auto m = plan.get_i64("m", 2);
    spec.catcher_speed = speeds.size() >= 2 ? speeds[1] : Rational(0);
    spec.caught_speed = speeds.empty() ? Rational(0) : speeds.back();
    spec.catcher_index = 2 * m + 1;
    spec.caught_index = 2;
    spec.max_speed = speeds.empty() ? Rational(0) : speeds.front();
    try {
      out.summary["h"] = theory::h_of_m(speeds, m);
      out.summary["m"] = m;
      out.summary["m0"] = theory::m_zero(speeds);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    spec.catcher_speed = plan.get_rational("catcher-speed");
    spec.caught_speed = plan.get_rational("caught-speed");
    spec.catcher_index = plan.get_i64("catcher-index", 0);
    spec.caught_index = plan.get_i64("caught-index", 0);
    spec.max_speed = plan.get_rational("max-speed");
  }
  try {
    const auto [t0, x0] = theory::collision_point(spec);
    const auto a = theory::window_a(spec);
    out.summary["t0"] = t0.str();
    out.summary["x0"] = x0.str();
    out.summary["a"] = a;
    out.csv = "t0,x0,a\n" + t0.str() + "," + x0.str() + "," +
              std::to_string(a) + "\n";
    out.stats = {{"a", a}};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

HandlerOut do_epsilon(const ExperimentPlan& plan, const CommonParams&) {
  const auto law = plan.get_speed_law();
  if (!law.is_atomic() || law.size() < 3)
    throw ConfigError("key 'speeds': epsilon needs an atomic law on >= 3 speeds");
  std::vector<Rational> speeds;
  for (const auto& a : law.atoms()) speeds.push_back(a.speed);
  const auto m0 = theory::m_zero(speeds);
  const auto h = theory::h_of_m(speeds, m0);
  const auto eps = theory::epsilon_event(law);
  HandlerOut out;
  out.summary["epsilon"] = eps.str();
  out.summary["epsilon_double"] = eps.to_double();
  out.summary["m0"] = m0;
  out.summary["h"] = h;
  out.csv = "m0,h,epsilon\n" + std::to_string(m0) + "," + std::to_string(h) +
            "," + eps.str() + "\n";
  out.stats = {{"epsilon", eps.str()}};
  return out;
}

HandlerOut do_threshold(const ExperimentPlan& plan, const CommonParams&) {
  const auto mode = plan.get_string("mode", "unit");
  const auto width = plan.get_double("width", 1e-6);
  ballistic::ThresholdRoot root;
  if (mode == "unit")
    root = ballistic::threshold_unit(width);
  else if (mode == "expo")
    root = ballistic::threshold_expo(width);
  else
    throw ConfigError("key 'mode': expected unit or expo, got '" + mode + "'");

  HandlerOut out;
  out.summary["mode"] = mode;
  out.summary["root"] = root.root;
  out.summary["bracket_below"] = root.below.str();
  out.summary["bracket_above"] = root.above.str();
  out.csv = "mode,root,below,above\n" + mode + "," + fmt_double(root.root) +
            "," + root.below.str() + "," + root.above.str() + "\n";
  out.stats = {{"mode", mode}, {"root", root.root}};
  return out;
}

HandlerOut do_walk(const ExperimentPlan& plan, const CommonParams& c) {
  if (!plan.has("left") || !plan.has("right") || !plan.has("lazy"))
    throw ConfigError("walk needs keys 'left', 'right' and 'lazy'");
  theory::WalkParams w(plan.get_double("left", 0),
                       plan.get_double("right", 0),
                       plan.get_double("lazy", 0));
  const auto max_steps = plan.get_u64("max-steps", 10'000);
  const auto reps = plan.get_u64("reps", 100'000);

  std::vector<std::uint8_t> hits;
  const double extinction = theory::walk_extinction(w);
  const double pgf1 = theory::walk_return_pgf(w, 1.0);
  auto est = theory::walk_simulate(w, max_steps, reps, c.seed, c.workers,
                                   c.level, c.shards ? &hits : nullptr);

  HandlerOut out;
  out.summary["extinction"] = extinction;
  out.summary["pgf_at_1"] = pgf1;
  out.summary["pgf_gap"] = std::abs(extinction - pgf1);
  out.summary["estimate"] = estimate_json(est, c.seed);
  out.summary["max_steps"] = max_steps;
  std::ostringstream csv;
  csv << "extinction,pgf_at_1,successes,reps,estimate,low,high\n"
      << fmt_double(extinction) << "," << fmt_double(pgf1) << ","
      << estimate_csv(est) << "\n";
  out.csv = csv.str();
  out.stats = {{"extinction", extinction}, {"estimate", est.point}};
  if (c.shards) {
    std::ostringstream sh;
    for (std::uint64_t rep = 0; rep < reps; ++rep)
      sh << json{{"rep", rep}, {"hit", static_cast<int>(hits[rep])}}.dump()
         << "\n";
    out.shards = sh.str();
  }
  return out;
}

HandlerOut do_operator(const ExperimentPlan& plan, const CommonParams& c) {
  if (!plan.has("p1") || !plan.has("p2") || !plan.has("eps"))
    throw ConfigError("operator needs keys 'p1', 'p2' and 'eps'");
  const double p1 = plan.get_double("p1", 0);
  const double p2 = plan.get_double("p2", 0);
  const double eps = plan.get_double("eps", 0);
  const auto iters = plan.get_u64("iters", 1000);
  const auto trunc = plan.get_u64("trunc", 1000);
  if (trunc < 2 || trunc > 20'000)
    throw GuardError("key 'trunc': must lie in [2, 20000]");
  if (iters < 1 || iters > 1'000'000)
    throw GuardError("key 'iters': must lie in [1, 1000000]");

  auto res = theory::iterate_A(p1, p2, eps, iters, trunc, c.workers);
  const double q = 1.0 - p1 - p2;
  const double r = p2 + eps * q;
  const double ref_overflow =
      r > 0.0 ? 1.0 - std::min(1.0, p1 / r) : (p1 > 0.0 ? 0.0 : 1.0);

  HandlerOut out;
  out.summary["overflow"] = res.final.overflow;
  out.summary["reference_overflow"] = ref_overflow;
  out.summary["abs_error"] = std::abs(res.final.overflow - ref_overflow);
  out.summary["iterations_run"] = res.iterations_run;
  out.summary["reached_fixpoint"] = res.reached_fixpoint;
  out.summary["monotone"] = res.monotone;
  std::ostringstream csv;
  csv << "k,mass\n";
  for (std::size_t k = 1; k <= res.final.trunc; ++k)
    if (res.final.mass[k] > 0.0)
      csv << k << "," << fmt_double(res.final.mass[k]) << "\n";
  csv << "overflow," << fmt_double(res.final.overflow) << "\n";
  out.csv = csv.str();
  out.stats = {{"overflow", res.final.overflow},
               {"reference_overflow", ref_overflow}};
  return out;
}

HandlerOut do_ballistic(const ExperimentPlan& plan, const CommonParams& c) {
  const auto p = plan.get_rational("p");
  const auto m = plan.get_i64("window", 1000);
  const auto reps = plan.get_u64("reps", 10'000);
  const auto spacing_str = plan.get_string("spacing", "unit");
  bool poisson = false;
  if (spacing_str == "unit")
    poisson = false;
  else if (spacing_str == "exp:1")
    poisson = true;
  else
    throw ConfigError("key 'spacing': ballistic takes unit or exp:1, got '" +
                      spacing_str + "'");

  BinomialEstimate est;
  try {
    est = ballistic::ba_survival_estimate(p, m, poisson, reps, c.seed,
                                          c.workers, c.level);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  HandlerOut out;
  out.summary["p"] = p.str();
  out.summary["window"] = m;
  out.summary["spacing"] = spacing_str;
  out.summary["estimate"] = estimate_json(est, c.seed);
  json atoms = json::array();
  for (const auto& a : ballistic::nu_to_bullet(p).atoms())
    atoms.push_back({{"speed", a.speed.str()}, {"prob", a.prob.str()}});
  out.summary["bullet_law"] = std::move(atoms);
  std::ostringstream csv;
  csv << "p,window,successes,reps,estimate,low,high\n"
      << p.str() << "," << m << "," << estimate_csv(est) << "\n";
  out.csv = csv.str();
  out.stats = {{"p", p.str()}, {"estimate", est.point}};
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

RunOutputs run_plan(const ExperimentPlan& plan) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto c = common_params(plan);
  const std::string format = plan.get_string("format", "json");
  if (format != "json" && format != "csv")
    throw ConfigError("key 'format': expected json or csv, got '" + format +
                      "'");

  HandlerOut h;
  switch (plan.command()) {
    case Command::Simulate: h = do_simulate(plan, c); break;
    case Command::Survival: h = do_survival(plan, c); break;
    case Command::TwoSided: h = do_two_sided(plan, c); break;
    case Command::Qn: h = do_qn(plan, c); break;
    case Command::Nazarov: h = do_nazarov(plan, c); break;
    case Command::Oracle: h = do_oracle(plan, c); break;
    case Command::Window: h = do_window(plan, c); break;
    case Command::Epsilon: h = do_epsilon(plan, c); break;
    case Command::Threshold: h = do_threshold(plan, c); break;
    case Command::Walk: h = do_walk(plan, c); break;
    case Command::Operator: h = do_operator(plan, c); break;
    case Command::Ballistic: h = do_ballistic(plan, c); break;
  }

  RunOutputs out;
  out.summary = json{{"command", command_name(plan.command())},
                     {"seed", c.seed},
                     {"results", std::move(h.summary)}};
  out.table_csv = std::move(h.csv);
  out.shards_jsonl = std::move(h.shards);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  out.manifest = json{{"artifact_version", kArtifactVersion},
                      {"command", command_name(plan.command())},
                      {"config_hash", plan.config_hash()},
                      {"master_seed", c.seed},
                      {"wall_time_s", wall},
                      {"config", plan.params()},
                      {"summary_stats", std::move(h.stats)}};

  out.out_dir = plan.get_string("out", "annihilate_out");
  std::error_code ec;
  fs::create_directories(out.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out.out_dir + "'");
  write_file(fs::path(out.out_dir) / "summary.json", out.summary.dump(2) + "\n");
  write_file(fs::path(out.out_dir) / "manifest.json",
             out.manifest.dump(2) + "\n");
  if (!out.table_csv.empty())
    write_file(fs::path(out.out_dir) / "curve.csv", out.table_csv);
  if (!out.shards_jsonl.empty())
    write_file(fs::path(out.out_dir) / "replicates.jsonl", out.shards_jsonl);
  return out;
}

ExperimentPlan plan_from_manifest(const std::string& manifest_path) {
  std::ifstream f(manifest_path, std::ios::binary);
  if (!f) throw IoError("cannot open manifest '" + manifest_path + "'");
  json m;
  try {
    f >> m;
  } catch (const std::exception& e) {
    throw IoError("cannot parse manifest '" + manifest_path +
                  "': " + e.what());
  }
  if (!m.contains("command") || !m.contains("config"))
    throw ConfigError("manifest is missing 'command' or 'config'");
  const auto cmd = parse_command(m["command"].get<std::string>());
  if (!cmd)
    throw ConfigError("manifest names unknown command '" +
                      m["command"].get<std::string>() + "'");
  std::map<std::string, std::string> params;
  for (const auto& [k, v] : m["config"].items())
    params[k] = v.get<std::string>();
  return load_plan(*cmd, params, {});
}

}  // namespace annihilate::harness
