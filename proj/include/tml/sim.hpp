#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tml/config.hpp"
#include "tml/diagnostics.hpp"
#include "tml/model.hpp"
#include "tml/print.hpp"

namespace tml {

enum class Cause { Spawn, Flow, Trigger, Retired };

constexpr std::string_view to_string(Cause c) {
  switch (c) {
    case Cause::Spawn:   return "spawn";
    case Cause::Flow:    return "flow";
    case Cause::Trigger: return "trigger";
    case Cause::Retired: return "retired";
  }
  return "?";
}

// One row of a trace: at `tick`, instance `thing` fired `stage`.
// A retired row marks the instance leaving the system from that stage.
struct Firing {
  int tick = 0;
  StageRef stage;
  std::string thing;  // kind#n
  Cause cause = Cause::Spawn;

  friend bool operator==(const Firing&, const Firing&) = default;
};

struct Trace {
  std::vector<Firing> firings;
  int horizon = 0;     // last tick with activity (max_ticks if exhausted)
  bool exhausted = false;  // true when max_ticks hit with work remaining
};

// Byte-stable JSON-lines serialization of a trace. All values are plain
// identifiers and integers, so no escaping is needed.
inline std::string trace_jsonl(const Trace& trace) {
  std::string out;
  for (const Firing& f : trace.firings) {
    out += "{\"tick\":" + std::to_string(f.tick) + ",\"stage\":\"" +
           f.stage.str() + "\",\"thing\":\"" + f.thing + "\",\"cause\":\"" +
           std::string(to_string(f.cause)) + "\"}\n";
  }
  return out;
}

namespace detail {

// The thing kind minted by a create stage: the machine's own name when a
// thing of that name is declared, otherwise the label of the first flow
// out of the create stage, otherwise the machine name verbatim.
inline std::string spawn_kind(const Model& model, const StageRef& create) {
  std::string leaf = leaf_name(create.path);
  if (model.has_thing(leaf)) return leaf;
  std::vector<const Flow*> out;
  for (const Flow& f : model.flows)
    if (f.source == create) out.push_back(&f);
  if (!out.empty()) {
    std::sort(out.begin(), out.end(), [](const Flow* a, const Flow* b) {
      return flow_line(*a) < flow_line(*b);
    });
    return out.front()->thing;
  }
  return leaf;
}

}  // namespace detail

// Deterministic timed execution. Each tick, in order: configured spawns
// fire their create stages; instances whose stage time is up depart —
// firing the triggers their stage sources, then following the least
// eligible flow (or retiring when none leaves their stage); creations
// caused by triggers fire last. A transfer stage that is the target of a
// trigger is gated: only instances that have departed the trigger's
// source stage may pass it; others wait. An instance departing an accept
// or receive stage whose machine is configured `accept = never` is
// rejected and retires there.
inline Trace simulate(const Model& model, const SimConfig& cfg) {
  struct Instance {
    std::string id;
    std::string kind;
    StageRef stage;
    int departure = 0;
    bool alive = true;
    int alloc = 0;
    std::set<StageRef> armed;
  };

  Trace trace;
  std::vector<Instance> instances;
  std::map<std::string, int> counters;
  int alloc_counter = 0;

  std::map<StageRef, std::vector<const Flow*>> flows_from;
  for (const Flow& f : model.flows) flows_from[f.source].push_back(&f);
  for (auto& [_, fs] : flows_from)
    std::sort(fs.begin(), fs.end(), [](const Flow* a, const Flow* b) {
      if (!(a->target == b->target)) return a->target < b->target;
      return a->thing < b->thing;
    });

  std::map<StageRef, std::vector<const Trigger*>> triggers_from;
  std::set<StageRef> gated;
  for (const Trigger& t : model.triggers) {
    triggers_from[t.source].push_back(&t);
    if (t.target.kind == StageKind::Transfer) gated.insert(t.target);
  }
  for (auto& [_, ts] : triggers_from)
    std::sort(ts.begin(), ts.end(), [](const Trigger* a, const Trigger* b) {
      return a->target < b->target;
    });

  auto make_instance = [&](const StageRef& at, int tick,
                           Cause cause) -> Instance& {
    Instance ins;
    ins.kind = detail::spawn_kind(model, at);
    ins.id = ins.kind + "#" + std::to_string(++counters[ins.kind]);
    ins.stage = at;
    ins.departure = tick + cfg.duration(at.kind);
    ins.alloc = ++alloc_counter;
    trace.firings.push_back({tick, at, ins.id, cause});
    instances.push_back(std::move(ins));
    return instances.back();
  };

  std::vector<std::pair<Spawn, int>> pending;  // spawn + config order
  for (size_t i = 0; i < cfg.spawns.size(); ++i)
    pending.emplace_back(cfg.spawns[i], static_cast<int>(i));

  auto quiescent = [&] {
    if (!pending.empty()) return false;
    for (const Instance& ins : instances)
      if (ins.alive) return false;
    return true;
  };

  for (int tick = 1; tick <= cfg.max_ticks; ++tick) {
    if (quiescent()) {
      trace.horizon = tick - 1;
      return trace;
    }

    // Configured spawns due now, least stage first.
    std::vector<std::pair<Spawn, int>> due;
    for (auto it = pending.begin(); it != pending.end();) {
      if (it->first.tick == tick) {
        due.push_back(*it);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
    std::sort(due.begin(), due.end(), [](const auto& a, const auto& b) {
      if (!(a.first.stage == b.first.stage))
        return a.first.stage < b.first.stage;
      return a.second < b.second;
    });
    for (const auto& [spawn, _] : due)
      for (int c = 0; c < spawn.count; ++c)
        make_instance(spawn.stage, tick, Cause::Spawn);

    // Departures. Effects are computed from a snapshot, rows sorted by
    // the stage they land on so same-tick activity reads deterministically.
    std::vector<size_t> departing;
    for (size_t i = 0; i < instances.size(); ++i)
      if (instances[i].alive && instances[i].departure == tick)
        departing.push_back(i);
    std::sort(departing.begin(), departing.end(), [&](size_t a, size_t b) {
      if (!(instances[a].stage == instances[b].stage))
        return instances[a].stage < instances[b].stage;
      return instances[a].id < instances[b].id;
    });

    std::vector<Firing> rows;
    std::vector<std::pair<StageRef, int>> creations;  // target, cause alloc
    for (size_t idx : departing) {
      Instance& ins = instances[idx];
      auto trig_it = triggers_from.find(ins.stage);
      if (trig_it != triggers_from.end()) {
        for (const Trigger* t : trig_it->second) {
          if (t->target.kind == StageKind::Create)
            creations.emplace_back(t->target, ins.alloc);
          else
            ins.armed.insert(t->target);
        }
      }

      if ((ins.stage.kind == StageKind::Accept ||
           ins.stage.kind == StageKind::Receive) &&
          cfg.accept_policy(ins.stage.path) == AcceptPolicy::Never) {
        ins.alive = false;
        rows.push_back({tick, ins.stage, ins.id, Cause::Retired});
        continue;
      }

      auto flow_it = flows_from.find(ins.stage);
      const Flow* next = nullptr;
      bool any_kind_match = false;
      if (flow_it != flows_from.end()) {
        for (const Flow* f : flow_it->second) {
          if (f->thing != ins.kind) continue;
          any_kind_match = true;
          if (gated.count(f->target) && !ins.armed.count(f->target))
            continue;
          next = f;
          break;  // flows are sorted; first eligible is the least target
        }
      }
      if (next) {
        ins.stage = next->target;
        ins.departure = tick + cfg.duration(next->target.kind);
        rows.push_back({tick, ins.stage, ins.id, Cause::Flow});
      } else if (any_kind_match) {
        ins.departure = tick + 1;  // gate still closed: wait a tick
      } else {
        ins.alive = false;
        rows.push_back({tick, ins.stage, ins.id, Cause::Retired});
      }
    }
    std::sort(rows.begin(), rows.end(), [](const Firing& a, const Firing& b) {
      if (!(a.stage == b.stage)) return a.stage < b.stage;
      return a.thing < b.thing;
    });
    for (Firing& r : rows) trace.firings.push_back(std::move(r));

    // Creations caused by triggers fire after the movement settles.
    std::sort(creations.begin(), creations.end(),
              [](const auto& a, const auto& b) {
                if (!(a.first == b.first)) return a.first < b.first;
                return a.second < b.second;
              });
    for (const auto& [target, _] : creations)
      make_instance(target, tick, Cause::Trigger);
  }

  trace.horizon = cfg.max_ticks;
  trace.exhausted = !quiescent();
  return trace;
}

}  // namespace tml
