#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "annihilate/process.hpp"
#include "annihilate/rational.hpp"

namespace annihilate::engine {

// ---------------------------------------------------------------------------
// Fates
// ---------------------------------------------------------------------------

template <class N>
struct Annihilation {
  N time{};
  N position{};
  std::vector<std::int64_t> group;  // bullet indices sharing (time, position)
};

// Outcome of the deterministic dynamics up to a horizon (nullopt horizon =
// run to quiescence). A bullet whose fire_time exceeds the horizon never
// enters the dynamics and is reported alive.
template <class N>
struct FateTable {
  std::vector<Bullet<N>> bullets;
  std::vector<std::optional<Annihilation<N>>> fates;
  std::optional<N> horizon;

  std::size_t alive_count() const {
    std::size_t k = 0;
    for (const auto& f : fates)
      if (!f) ++k;
    return k;
  }
  bool is_alive(std::size_t pos) const { return !fates[pos].has_value(); }
};

template <class N>
bool same_fates(const FateTable<N>& a, const FateTable<N>& b) {
  if (a.fates.size() != b.fates.size()) return false;
  for (std::size_t i = 0; i < a.fates.size(); ++i) {
    const auto& fa = a.fates[i];
    const auto& fb = b.fates[i];
    if (fa.has_value() != fb.has_value()) return false;
    if (fa && (fa->time != fb->time || fa->position != fb->position ||
               fa->group != fb->group))
      return false;
  }
  return true;
}

// Coincidence of two bullet trajectories, front fired strictly before rear.
// Empty when the rear bullet is not strictly faster: it never catches up.
template <class N>
std::optional<std::pair<N, N>> collision_time(const Bullet<N>& front,
                                              const Bullet<N>& rear) {
  if (!(front.fire_time < rear.fire_time))
    throw std::invalid_argument("collision_time: bullets out of firing order");
  if (!(front.speed < rear.speed)) return std::nullopt;
  N t = (rear.speed * rear.fire_time - front.speed * front.fire_time) /
        (rear.speed - front.speed);
  N x = front.speed * (t - front.fire_time);
  return std::make_pair(std::move(t), std::move(x));
}

// ---------------------------------------------------------------------------
// Kinematics policies
// ---------------------------------------------------------------------------

namespace detail {

template <class N>
struct ValueKin {
  using Time = N;
  using Pos = N;
  static constexpr bool kExact = !std::is_floating_point_v<N>;
  struct Body {
    N fire{};
    N speed{};
  };
  Time fire_time(const Body& b) const { return b.fire; }
  std::optional<std::pair<Time, Pos>> collide(const Body& front,
                                              const Body& rear) const {
    if (!(front.speed < rear.speed)) return std::nullopt;
    N t = (rear.speed * rear.fire - front.speed * front.fire) /
          (rear.speed - front.speed);
    N x = front.speed * (t - front.fire);
    return std::make_pair(std::move(t), std::move(x));
  }
  Pos pos_at(const Body& b, const Time& t) const { return b.speed * (t - b.fire); }
};

// Exact integer kinematics for atomic rational speeds on integer firing
// times. With L = lcm of speed denominators and D = lcm of all pairwise
// scaled-speed differences, every event time is an integer multiple of 1/D
// and every event position a multiple of 1/(L*D), so the whole hot path is
// int64 arithmetic with exact ties.
struct ScaledKin {
  using Time = std::int64_t;  // time * D
  using Pos = std::int64_t;   // position * L * D
  static constexpr bool kExact = true;
  struct Body {
    std::int64_t fire = 0;  // raw integer firing time
    std::int64_t a = 0;     // speed * L
  };
  std::int64_t L = 1;
  std::int64_t D = 1;

  Time fire_time(const Body& b) const { return D * b.fire; }
  std::optional<std::pair<Time, Pos>> collide(const Body& front,
                                              const Body& rear) const {
    if (rear.a <= front.a) return std::nullopt;
    const std::int64_t delta = rear.a - front.a;
    const Time t = (D / delta) * (rear.a * rear.fire - front.a * front.fire);
    const Pos x = front.a * (t - D * front.fire);
    return std::make_pair(t, x);
  }
  Pos pos_at(const Body& b, const Time& t) const { return b.a * (t - D * b.fire); }
};

// ---------------------------------------------------------------------------
// Event-driven core: adjacency candidates in a lazily invalidated priority
// queue. A freshly fired bullet is strictly behind every live bullet, so
// insertion is always at the rear and an adjacency, once broken, never
// re-forms; a candidate is valid exactly when both members are still alive.
// ---------------------------------------------------------------------------

struct CoreOptions {
  // Stop once this input position has died (its fate is final: bullets fired
  // later can never affect an already-completed event).
  std::optional<std::int32_t> stop_after_death;
  // O(n) positional no-passing scan before and after every annihilation.
  bool full_checks = false;
};

template <class K>
struct CoreGroup {
  typename K::Time time;
  typename K::Pos pos;
  std::vector<std::int32_t> members;  // input positions, ascending
};

template <class K>
struct CoreResult {
  std::vector<std::int32_t> group_of;  // -1 while alive
  std::vector<CoreGroup<K>> groups;
  std::int64_t fired = 0;
  bool stopped_early = false;
};

template <class K>
class EventCore {
 public:
  using Time = typename K::Time;
  using Pos = typename K::Pos;
  using Body = typename K::Body;

  EventCore(const K& kin, std::span<const Body> bodies,
            std::optional<Time> horizon, CoreOptions opt)
      : kin_(kin), bodies_(bodies), horizon_(std::move(horizon)),
        opt_(opt) {}

  CoreResult<K> run() {
    const std::int32_t n = static_cast<std::int32_t>(bodies_.size());
    res_.group_of.assign(n, -1);
    state_.assign(n, State::Unfired);
    prev_.assign(n, -1);
    next_.assign(n, -1);

    std::int32_t next_fire = 0;
    for (;;) {
      purge_stale();
      const bool have_coll = !queue_.empty();
      const bool have_fire = next_fire < n;
      if (!have_coll && !have_fire) break;

      if (have_coll &&
          (!have_fire ||
           !(kin_.fire_time(bodies_[next_fire]) < queue_.top().t))) {
        // Collisions first on ties; a bullet fired at the collision instant
        // starts at the origin and cannot take part in it.
        if (horizon_ && *horizon_ < queue_.top().t) break;
        process_batch();
        if (res_.stopped_early) break;
      } else {
        const Time tf = kin_.fire_time(bodies_[next_fire]);
        if (horizon_ && *horizon_ < tf) break;
        fire(next_fire++);
      }
    }
    return std::move(res_);
  }

 private:
  enum class State : std::uint8_t { Unfired, Alive, Dead };

  struct Cand {
    Time t;
    Pos x;
    std::int32_t front;
    std::int32_t rear;
    bool operator>(const Cand& o) const {
      return std::tie(t, front, rear) > std::tie(o.t, o.front, o.rear);
    }
  };

  void purge_stale() {
    while (!queue_.empty()) {
      const Cand& c = queue_.top();
      if (state_[c.front] == State::Alive && state_[c.rear] == State::Alive)
        return;
      queue_.pop();
    }
  }

  void push_candidate(std::int32_t front, std::int32_t rear) {
    auto hit = kin_.collide(bodies_[front], bodies_[rear]);
    if (!hit) return;
    queue_.push(Cand{std::move(hit->first), std::move(hit->second), front, rear});
  }

  void fire(std::int32_t i) {
    state_[i] = State::Alive;
    ++res_.fired;
    prev_[i] = tail_;
    next_[i] = -1;
    if (tail_ >= 0) {
      next_[tail_] = i;
      push_candidate(tail_, i);
    } else {
      head_ = i;
    }
    tail_ = i;
  }

  void process_batch() {
    const Time t0 = queue_.top().t;
    // Collect every valid candidate at exactly t0; bridge candidates created
    // below always lie strictly later, so the batch is complete up front.
    std::vector<Cand> batch;
    while (!queue_.empty() && !(t0 < queue_.top().t)) {
      Cand c = queue_.top();
      queue_.pop();
      if (state_[c.front] == State::Alive && state_[c.rear] == State::Alive)
        batch.push_back(std::move(c));
    }
    // Group members by exact position: simultaneous same-point pairs chain
    // into one annihilation group.
    std::vector<CoreGroup<K>> slots;
    for (auto& c : batch) {
      CoreGroup<K>* slot = nullptr;
      for (auto& s : slots)
        if (s.pos == c.x) {
          slot = &s;
          break;
        }
      if (!slot) {
        slots.push_back(CoreGroup<K>{t0, std::move(c.x), {}});
        slot = &slots.back();
      }
      slot->members.push_back(c.front);
      slot->members.push_back(c.rear);
    }
    if (opt_.full_checks) check_no_passing(t0, slots, /*before=*/true);

    for (auto& slot : slots) {
      std::sort(slot.members.begin(), slot.members.end());
      slot.members.erase(
          std::unique(slot.members.begin(), slot.members.end()),
          slot.members.end());
      execute_group(std::move(slot));
    }
    if (opt_.full_checks) check_no_passing(t0, {}, /*before=*/false);

    if (opt_.stop_after_death &&
        state_[*opt_.stop_after_death] == State::Dead)
      res_.stopped_early = true;
  }

  void execute_group(CoreGroup<K> group) {
    // Same-position members must occupy a contiguous run of the alive list.
    for (std::size_t k = 0; k + 1 < group.members.size(); ++k)
      if (next_[group.members[k]] != group.members[k + 1])
        throw std::logic_error("annihilation group is not contiguous");
    if (group.members.size() < 2)
      throw std::logic_error("annihilation group of size < 2");

    const std::int32_t l = group.members.front();
    const std::int32_t r = group.members.back();
    const std::int32_t p = prev_[l];
    const std::int32_t nx = next_[r];
    const auto gid = static_cast<std::int32_t>(res_.groups.size());
    for (std::int32_t m : group.members) {
      state_[m] = State::Dead;
      res_.group_of[m] = gid;
    }
    if (p >= 0) next_[p] = nx; else head_ = nx;
    if (nx >= 0) prev_[nx] = p; else tail_ = p;
    if (p >= 0 && nx >= 0) {
      if constexpr (K::kExact) {
        auto hit = kin_.collide(bodies_[p], bodies_[nx]);
        if (hit && !(group.time < hit->first))
          throw std::logic_error("bridge candidate not after the event");
      }
      push_candidate(p, nx);
    }
    res_.groups.push_back(std::move(group));
  }

  void check_no_passing(const Time& t, const std::vector<CoreGroup<K>>& slots,
                        bool before) const {
    // Survivor positions must strictly decrease with index; just before an
    // annihilation, equality is allowed exactly within a dying group.
    std::int32_t i = head_;
    while (i >= 0 && next_[i] >= 0) {
      const std::int32_t j = next_[i];
      const Pos xi = kin_.pos_at(bodies_[i], t);
      const Pos xj = kin_.pos_at(bodies_[j], t);
      if (xj < xi) {
        i = j;
        continue;
      }
      bool excused = false;
      if (before && xi == xj) {
        for (const auto& s : slots)
          if (s.pos == xi) excused = true;
      }
      if (!excused) throw std::logic_error("no-passing invariant violated");
      i = j;
    }
  }

  const K& kin_;
  std::span<const Body> bodies_;
  std::optional<Time> horizon_;
  CoreOptions opt_;
  CoreResult<K> res_;

  std::vector<State> state_;
  std::vector<std::int32_t> prev_, next_;
  std::int32_t head_ = -1, tail_ = -1;
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> queue_;
};

template <class K>
CoreResult<K> simulate(const K& kin, std::span<const typename K::Body> bodies,
                       std::optional<typename K::Time> horizon,
                       const CoreOptions& opt = {}) {
  return EventCore<K>(kin, bodies, std::move(horizon), opt).run();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public runs
// ---------------------------------------------------------------------------

struct RunOptions {
  bool full_checks = false;
};

template <class N>
void validate_configuration(const std::vector<Bullet<N>>& bullets) {
  for (std::size_t i = 0; i < bullets.size(); ++i) {
    if (!(N(0) < bullets[i].speed))
      throw std::invalid_argument("bullet speeds must be positive");
    if (i > 0 && !(bullets[i - 1].fire_time < bullets[i].fire_time))
      throw std::invalid_argument("fire times must be strictly increasing");
  }
}

// Event-driven dynamics: repeatedly execute the earliest coincidence among
// fired, surviving bullets, annihilating every maximal same-(time, position)
// group, until no event happens at or before the horizon.
template <class N>
FateTable<N> run(std::vector<Bullet<N>> bullets, std::optional<N> horizon,
                 const RunOptions& opt = {}) {
  validate_configuration(bullets);
  using K = detail::ValueKin<N>;
  K kin;
  std::vector<typename K::Body> bodies;
  bodies.reserve(bullets.size());
  for (const auto& b : bullets)
    bodies.push_back(typename K::Body{b.fire_time, b.speed});
  detail::CoreOptions copt;
  copt.full_checks = opt.full_checks;
  auto core = detail::simulate<K>(kin, bodies, horizon, copt);

  FateTable<N> table;
  table.horizon = std::move(horizon);
  table.fates.resize(bullets.size());
  for (std::size_t i = 0; i < bullets.size(); ++i) {
    if (core.group_of[i] < 0) continue;
    const auto& g = core.groups[core.group_of[i]];
    Annihilation<N> a;
    a.time = g.time;
    a.position = g.pos;
    for (auto m : g.members) a.group.push_back(bullets[m].index);
    table.fates[i] = std::move(a);
  }
  table.bullets = std::move(bullets);
  return table;
}

template <class N>
FateTable<N> run_to_quiescence(std::vector<Bullet<N>> bullets,
                               const RunOptions& opt = {}) {
  return run<N>(std::move(bullets), std::nullopt, opt);
}

// Naive reference dynamics kept for testing and benchmarking: at every step
// rescan all surviving pairs for the globally earliest coincidence and
// annihilate every same-(time, position) group. Independent of the
// event-driven path (no queue, no adjacency bookkeeping).
template <class N>
FateTable<N> reference_run(std::vector<Bullet<N>> bullets,
                           std::optional<N> horizon) {
  validate_configuration(bullets);
  const std::size_t n = bullets.size();
  FateTable<N> table;
  table.fates.resize(n);
  std::vector<char> alive(n, 1);

  for (;;) {
    std::optional<N> tmin;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (!(bullets[i].speed < bullets[j].speed)) continue;
        N t = (bullets[j].speed * bullets[j].fire_time -
               bullets[i].speed * bullets[i].fire_time) /
              (bullets[j].speed - bullets[i].speed);
        if (!tmin || t < *tmin) tmin = std::move(t);
      }
    }
    if (!tmin) break;
    if (horizon && *horizon < *tmin) break;

    // Collect every pair coinciding at tmin and merge members by position.
    std::vector<std::pair<N, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (!(bullets[i].speed < bullets[j].speed)) continue;
        N t = (bullets[j].speed * bullets[j].fire_time -
               bullets[i].speed * bullets[i].fire_time) /
              (bullets[j].speed - bullets[i].speed);
        if (t != *tmin) continue;
        N x = bullets[i].speed * (t - bullets[i].fire_time);
        std::vector<std::size_t>* members = nullptr;
        for (auto& [gx, gm] : groups)
          if (gx == x) {
            members = &gm;
            break;
          }
        if (!members) {
          groups.emplace_back(std::move(x), std::vector<std::size_t>{});
          members = &groups.back().second;
        }
        members->push_back(i);
        members->push_back(j);
      }
    }
    for (auto& [x, members] : groups) {
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()),
                    members.end());
      Annihilation<N> a;
      a.time = *tmin;
      a.position = x;
      for (auto m : members) a.group.push_back(bullets[m].index);
      for (auto m : members) {
        alive[m] = 0;
        table.fates[m] = a;
      }
    }
  }
  table.horizon = std::move(horizon);
  table.bullets = std::move(bullets);
  return table;
}

// ---------------------------------------------------------------------------
// Exact scaled representation of an atomic law on integer firing times.
// ---------------------------------------------------------------------------

struct ScaledLaw {
  std::int64_t L = 1;
  std::int64_t D = 1;
  std::vector<std::int64_t> a;  // per atom, speed * L, descending

  // Largest |fire time| (or horizon) this representation can simulate
  // without int64 overflow: |X| <= 3 * D * max(a)^2 * F must stay < 2^62.
  bool fits(std::int64_t max_abs_time) const {
    if (max_abs_time <= 0) max_abs_time = 1;
    __int128 amax = 0;
    for (auto v : a) amax = std::max<__int128>(amax, v);
    const __int128 bound = 3 * static_cast<__int128>(D) * amax * amax *
                           static_cast<__int128>(max_abs_time);
    return bound < (static_cast<__int128>(1) << 62);
  }

  static std::optional<ScaledLaw> make(const SpeedLaw& law);
};

}  // namespace annihilate::engine
