#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/events.hpp"
#include "tml/grip.hpp"
#include "tml/model.hpp"
#include "tml/print.hpp"

namespace tml {

// Node shapes distinguish the stage kinds at a glance (see README for
// the legend).
constexpr std::string_view dot_shape(StageKind k) {
  switch (k) {
    case StageKind::Create:   return "ellipse";
    case StageKind::Receive:  return "house";
    case StageKind::Arrive:   return "trapezium";
    case StageKind::Accept:   return "diamond";
    case StageKind::Process:  return "box";
    case StageKind::Release:  return "invhouse";
    case StageKind::Transfer: return "rarrow";
  }
  return "box";
}

struct RenderOptions {
  std::vector<std::string> folded;  // machine paths rendered as one box
  std::string highlight;            // event whose region is colored
};

// Graphviz rendering: one cluster per machine, one node per stage, solid
// labeled edges for flows, dashed edges for triggers. Folded machines
// collapse to a single box3d node keeping their boundary arcs. An
// optional highlight colors one event's region red.
inline std::string to_dot(const Model& model,
                          const RenderOptions& opts = {}) {
  std::set<StageRef> hi_stages;
  std::set<std::string> hi_flows;  // canonical flow lines
  if (!opts.highlight.empty()) {
    const Event* e = model.find_event(opts.highlight);
    if (!e)
      throw Error("unknown-event",
                  "no event " + opts.highlight + " in the model");
    for (const StageRef& s : region_stages(*e)) hi_stages.insert(s);
    for (const RegionRef& r : e->region)
      if (r.is_flow)
        hi_flows.insert(detail::flow_line(Flow{r.thing, r.source, r.target,
                                               {}}));
  }

  auto fold_of = [&](const StageRef& r) -> const std::string* {
    for (const std::string& f : opts.folded)
      if (path_in_subtree(r.path, f)) return &f;
    return nullptr;
  };
  auto is_folded = [&](const std::string& path) {
    return std::find(opts.folded.begin(), opts.folded.end(), path) !=
           opts.folded.end();
  };

  std::ostringstream out;
  out << "digraph \"" << model.name << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=10];\n";

  int cluster_idx = 0;
  std::function<void(const Machine&, int)> emit =
      [&](const Machine& m, int depth) {
        std::string pad(static_cast<size_t>(depth) * 2, ' ');
        if (is_folded(m.path)) {
          out << pad << "\"" << m.path << "\" [label=\"" << m.name
              << "\", shape=box3d];\n";
          return;
        }
        out << pad << "subgraph cluster_m" << cluster_idx++ << " {\n";
        out << pad << "  label=\"" << (m.path.empty() ? model.name : m.name)
            << "\";\n";
        for (StageKind k : kStageKinds) {
          if (!m.has_stage(k)) continue;
          StageRef ref{m.path, k};
          out << pad << "  \"" << ref.str() << "\" [label=\"" << to_string(k)
              << "\", shape=" << dot_shape(k);
          if (hi_stages.count(ref)) out << ", color=red, penwidth=2";
          out << "];\n";
        }
        for (const Machine& sub : m.submachines) emit(sub, depth + 1);
        out << pad << "}\n";
      };
  emit(model.root, 1);

  auto node_id = [&](const StageRef& r) -> std::string {
    if (const std::string* f = fold_of(r)) return *f;
    return r.str();
  };

  std::vector<std::string> edges;
  for (const Flow& f : model.flows) {
    const std::string *fs = fold_of(f.source), *ft = fold_of(f.target);
    if (fs && ft && *fs == *ft) continue;  // internal to one fold
    std::string attrs = "label=\"" + f.thing + "\"";
    if (hi_flows.count(detail::flow_line(f)))
      attrs += ", color=red, penwidth=2";
    edges.push_back("  \"" + node_id(f.source) + "\" -> \"" +
                    node_id(f.target) + "\" [" + attrs + "];");
  }
  for (const Trigger& t : model.triggers) {
    const std::string *fs = fold_of(t.source), *ft = fold_of(t.target);
    if (fs && ft && *fs == *ft) continue;
    edges.push_back("  \"" + node_id(t.source) + "\" -> \"" +
                    node_id(t.target) + "\" [style=dashed];");
  }
  // Stable order; duplicates are kept so a folded node's degree always
  // equals its boundary arc count.
  std::sort(edges.begin(), edges.end());
  for (const std::string& e : edges) out << e << "\n";

  out << "}\n";
  return out.str();
}

// Tab-separated event timeline: one row per occurrence window.
inline std::string timeline_tsv(const Model& model, const Trace& trace) {
  std::ostringstream out;
  out << "event\tstart\tend\n";
  for (const Occurrence& o : occurrences(model, trace))
    out << o.event << "\t" << o.start << "\t" << o.end << "\n";
  return out.str();
}

}  // namespace tml
