#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/model.hpp"
#include "tml/sim.hpp"

namespace tml {

// Every stage of the model as an event of its own: named by the stage,
// one-stage region, one tick long. Canonical stage order.
inline std::vector<Event> elementary_events(const Model& model) {
  std::vector<Event> out;
  for (const StageRef& s : all_stages(model)) {
    Event e;
    e.name = s.str();
    e.region.push_back(RegionRef{false, s, "", {}, {}});
    e.duration = 1;
    out.push_back(std::move(e));
  }
  return out;
}

// One realized window of an event: the region first fired at `start` and
// the event's declared duration stretches the window to `end` inclusive.
// A region firing after `end` opens a fresh occurrence.
struct Occurrence {
  std::string event;
  int start = 0;
  int end = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

inline std::vector<Occurrence> occurrences(const Model& model,
                                           const Trace& trace) {
  std::vector<Occurrence> out;
  for (const Event& e : model.events) {
    std::vector<StageRef> stages = region_stages(e);
    std::set<StageRef> in_region(stages.begin(), stages.end());
    int window_end = -1;
    for (const Firing& f : trace.firings) {
      if (f.cause == Cause::Retired) continue;
      if (!in_region.count(f.stage)) continue;
      if (f.tick > window_end) {
        out.push_back({e.name, f.tick, f.tick + e.duration - 1});
        window_end = out.back().end;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Occurrence& a,
                                       const Occurrence& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.event != b.event) return a.event < b.event;
    return a.end < b.end;
  });
  return out;
}

// First tick at which each event starts; events that never occur are
// absent from the map.
inline std::map<std::string, int> first_starts(const Model& model,
                                               const Trace& trace) {
  std::map<std::string, int> out;
  for (const Occurrence& o : occurrences(model, trace))
    if (!out.count(o.event)) out[o.event] = o.start;
  return out;
}

// A snapshot of the run at time t: which events are in progress and
// where every live instance sits. t = 0 is the empty state before the
// run; anything past the horizon is out of range.
struct SystemState {
  int time = 0;
  std::vector<std::string> active;  // event names, sorted
  std::vector<std::pair<std::string, std::string>> positions;  // id -> stage
};

inline SystemState state_at(const Model& model, const Trace& trace, int t) {
  if (t < 0 || t > trace.horizon)
    throw Error("t-out-of-range",
                "time " + std::to_string(t) + " is outside 0.." +
                    std::to_string(trace.horizon));
  SystemState state;
  state.time = t;

  std::set<std::string> active;
  for (const Occurrence& o : occurrences(model, trace))
    if (o.start <= t && t <= o.end) active.insert(o.event);
  state.active.assign(active.begin(), active.end());

  std::map<std::string, std::string> pos;
  std::set<std::string> gone;
  for (const Firing& f : trace.firings) {
    if (f.tick > t) break;
    if (f.cause == Cause::Retired) {
      gone.insert(f.thing);
      pos.erase(f.thing);
    } else {
      pos[f.thing] = f.stage.str();
    }
  }
  state.positions.assign(pos.begin(), pos.end());
  return state;
}

// Byte-stable JSON serialization of a system state.
inline std::string state_json(const SystemState& s) {
  std::string out = "{\"time\":" + std::to_string(s.time) + ",\"active\":[";
  for (size_t i = 0; i < s.active.size(); ++i) {
    if (i) out += ",";
    out += "\"" + s.active[i] + "\"";
  }
  out += "],\"positions\":{";
  for (size_t i = 0; i < s.positions.size(); ++i) {
    if (i) out += ",";
    out += "\"" + s.positions[i].first + "\":\"" + s.positions[i].second +
           "\"";
  }
  out += "}}";
  return out;
}

// Check a trace against the declared chronology: each edge demands that
// the earlier event's first start strictly precedes the later one's.
// Edges over events that never occurred are reported as warnings.
inline std::vector<Diagnostic> check_chronology(const Model& model,
                                                const Trace& trace) {
  std::vector<Diagnostic> diags;
  std::map<std::string, int> starts = first_starts(model, trace);
  std::set<std::string> missing_reported;
  for (const ChronologyEdge& edge : model.chronology.edges) {
    SourceSpan span = edge.span.value_or(SourceSpan{});
    bool both = true;
    for (const std::string* n : {&edge.before, &edge.after}) {
      if (!starts.count(*n)) {
        both = false;
        if (missing_reported.insert(*n).second)
          diags.push_back({Severity::Warning, "event-never-occurred",
                           "event " + *n +
                               " is ordered by the chronology but never "
                               "occurred",
                           span});
      }
    }
    if (!both) continue;
    int b = starts[edge.before], a = starts[edge.after];
    if (b >= a)
      diags.push_back({Severity::Error, "chronology-violation",
                       "event " + edge.before + " starts at tick " +
                           std::to_string(b) + " but must precede " +
                           edge.after + " starting at tick " +
                           std::to_string(a),
                       span});
  }
  sort_diagnostics(diags);
  return diags;
}

}  // namespace tml
