#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/model.hpp"

namespace tml {

// The stage lattice. Within one machine a thing moves along these arcs
// only; between machines only transfer feeds transfer.
inline bool legal_flow_within(StageKind src, StageKind tgt) {
  switch (src) {
    case StageKind::Create:
    case StageKind::Receive:
    case StageKind::Accept:
      return tgt == StageKind::Process || tgt == StageKind::Release;
    case StageKind::Arrive:
      return tgt == StageKind::Accept;
    case StageKind::Process:
      return tgt == StageKind::Release;
    case StageKind::Release:
      return tgt == StageKind::Transfer;
    case StageKind::Transfer:
      return tgt == StageKind::Receive || tgt == StageKind::Arrive;
  }
  return false;
}

inline bool legal_flow_across(StageKind src, StageKind tgt) {
  return src == StageKind::Transfer && tgt == StageKind::Transfer;
}

namespace detail {

inline SourceSpan span_of(const std::optional<SourceSpan>& s) {
  return s.value_or(SourceSpan{});
}

// Union-find over region nodes for the connectivity check.
inline int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace detail

// One event's region must resolve and form a single connected piece of
// the machine (an event is a coherent subdiagram, not a scatter).
inline std::vector<Diagnostic> validate_event(const Model& model,
                                              const Event& e) {
  std::vector<Diagnostic> diags;
  SourceSpan s = detail::span_of(e.span);
  bool resolved = true;
  for (const RegionRef& r : e.region) {
    if (r.is_flow) {
      bool found = false;
      for (const Flow& f : model.flows)
        if (f.thing == r.thing && f.source == r.source &&
            f.target == r.target)
          found = true;
      if (!found) {
        diags.push_back({Severity::Error, "region-unresolved",
                         "event " + e.name + " region names no flow " +
                             r.str(),
                         s});
        resolved = false;
      }
    } else if (!resolve_stage(model, r.stage)) {
      diags.push_back({Severity::Error, "region-unresolved",
                       "event " + e.name + " region names no stage " +
                           r.stage.str(),
                       s});
      resolved = false;
    }
  }
  if (!resolved) return diags;

  std::vector<StageRef> nodes = region_stages(e);
  auto index_of = [&](const StageRef& r) -> int {
    for (size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == r) return static_cast<int>(i);
    return -1;
  };
  std::vector<int> parent(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) parent[i] = static_cast<int>(i);
  auto join = [&](const StageRef& a, const StageRef& b) {
    int ia = index_of(a), ib = index_of(b);
    if (ia < 0 || ib < 0) return;
    parent[detail::uf_find(parent, ia)] = detail::uf_find(parent, ib);
  };
  for (const RegionRef& r : e.region)
    if (r.is_flow) join(r.source, r.target);
  for (const Flow& f : model.flows) join(f.source, f.target);
  for (const Trigger& t : model.triggers) join(t.source, t.target);
  for (size_t i = 1; i < nodes.size(); ++i) {
    if (detail::uf_find(parent, static_cast<int>(i)) !=
        detail::uf_find(parent, 0)) {
      diags.push_back({Severity::Error, "region-disconnected",
                       "event " + e.name +
                           " region does not form a connected subgraph",
                       s});
      break;
    }
  }
  return diags;
}

// Structural checks over a parsed model. Errors make the model unusable
// for simulation; warnings flag suspicious but executable constructs.
inline std::vector<Diagnostic> validate(const Model& model) {
  std::vector<Diagnostic> diags;

  // Flow legality: stage lattice within a machine, transfer-to-transfer
  // across machines.
  for (const Flow& f : model.flows) {
    if (!resolve_stage(model, f.source) || !resolve_stage(model, f.target))
      continue;  // parse already reported dangling references
    if (f.source.path == f.target.path) {
      if (!legal_flow_within(f.source.kind, f.target.kind))
        diags.push_back({Severity::Error, "illegal-adjacency",
                         "flow " + f.source.str() + " -> " + f.target.str() +
                             " violates the stage order",
                         detail::span_of(f.span)});
    } else if (!legal_flow_across(f.source.kind, f.target.kind)) {
      diags.push_back({Severity::Error, "boundary-violation",
                       "flow " + f.source.str() + " -> " + f.target.str() +
                           " crosses a machine boundary outside transfer",
                       detail::span_of(f.span)});
    }
    if (!model.has_thing(f.thing))
      diags.push_back({Severity::Error, "undeclared-thing",
                       "flow uses undeclared thing " + f.thing,
                       detail::span_of(f.span)});
  }

  // Triggers point at an entry: a create stage (spawn a thing, possibly
  // feeding back into the own machine) or another machine's transfer
  // stage (let something through).
  for (const Trigger& t : model.triggers) {
    if (!resolve_stage(model, t.source) || !resolve_stage(model, t.target))
      continue;
    bool ok = !(t.source == t.target) &&
              (t.target.kind == StageKind::Create ||
               (t.target.kind == StageKind::Transfer &&
                t.source.path != t.target.path));
    if (!ok)
      diags.push_back({Severity::Error, "illegal-trigger-target",
                       "trigger " + t.source.str() + " -> " + t.target.str() +
                           " must target a create stage or a foreign "
                           "transfer",
                       detail::span_of(t.span)});
  }

  // Stage pairing per machine.
  for_each_machine(model.root, [&](const Machine& m) {
    SourceSpan s = detail::span_of(m.span);
    if (m.has_stage(StageKind::Release) && !m.has_stage(StageKind::Transfer))
      diags.push_back({Severity::Error, "release-without-transfer",
                       "machine " + m.path +
                           " releases things but has no transfer stage",
                       s});
    if (m.has_stage(StageKind::Accept) && !m.has_stage(StageKind::Arrive))
      diags.push_back({Severity::Error, "accept-without-arrive",
                       "machine " + m.path + " has accept without arrive",
                       s});
    if (m.has_stage(StageKind::Arrive) && !m.has_stage(StageKind::Accept))
      diags.push_back({Severity::Error, "arrive-without-accept",
                       "machine " + m.path + " has arrive without accept",
                       s});
  });

  // Event regions: every member must resolve, and the members must form
  // one connected piece of the machine.
  for (const Event& e : model.events) {
    std::vector<Diagnostic> ds = validate_event(model, e);
    diags.insert(diags.end(), ds.begin(), ds.end());
  }

  // Chronology names declared events and stays acyclic.
  bool chron_resolved = true;
  for (const ChronologyEdge& edge : model.chronology.edges) {
    for (const std::string* n : {&edge.before, &edge.after}) {
      if (!model.find_event(*n)) {
        diags.push_back({Severity::Error, "chronology-unknown-event",
                         "chronology orders unknown event " + *n,
                         detail::span_of(edge.span)});
        chron_resolved = false;
      }
    }
  }
  if (chron_resolved && !model.chronology.edges.empty()) {
    std::map<std::string, std::vector<std::string>> next;
    for (const ChronologyEdge& e : model.chronology.edges)
      next[e.before].push_back(e.after);
    std::map<std::string, int> mark;  // 0 new, 1 on stack, 2 done
    std::vector<std::string> stack;
    std::vector<std::string> cycle;
    std::function<bool(const std::string&)> dfs =
        [&](const std::string& n) -> bool {
      mark[n] = 1;
      stack.push_back(n);
      for (const std::string& m : next[n]) {
        if (mark[m] == 1) {
          auto it = std::find(stack.begin(), stack.end(), m);
          cycle.assign(it, stack.end());
          cycle.push_back(m);
          return true;
        }
        if (mark[m] == 0 && dfs(m)) return true;
      }
      stack.pop_back();
      mark[n] = 2;
      return false;
    };
    for (const auto& [n, _] : next) {
      if (mark[n] == 0 && dfs(n)) break;
    }
    if (!cycle.empty()) {
      std::string msg = "chronology cycle: ";
      for (size_t i = 0; i < cycle.size(); ++i) {
        if (i) msg += " -> ";
        msg += cycle[i];
      }
      diags.push_back({Severity::Error, "chronology-cycle", msg,
                       detail::span_of(model.chronology.edges[0].span)});
    }
  }

  // Reachability warning: a non-create stage nothing flows into and no
  // trigger points at can never fire.
  std::set<StageRef> fed;
  for (const Flow& f : model.flows) fed.insert(f.target);
  for (const Trigger& t : model.triggers) fed.insert(t.target);
  for (const StageRef& s : all_stages(model)) {
    if (s.kind == StageKind::Create) continue;
    if (fed.count(s)) continue;
    const Machine* m = model.find_machine(s.path);
    diags.push_back({Severity::Warning, "unreachable-stage",
                     "stage " + s.str() +
                         " has no inbound flow and no trigger",
                     detail::span_of(m ? m->span : std::nullopt)});
  }

  sort_diagnostics(diags);
  return diags;
}

}  // namespace tml
