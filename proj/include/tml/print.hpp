#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tml/model.hpp"

namespace tml {

namespace detail {

inline std::string flow_line(const Flow& f) {
  return "flow " + f.thing + " : " + f.source.str() + " -> " + f.target.str();
}

inline std::string trigger_line(const Trigger& t) {
  return "trigger " + t.source.str() + " -> " + t.target.str();
}

inline std::string event_line(const Event& e) {
  std::vector<StageRef> stages;
  std::vector<std::string> flow_refs;
  for (const RegionRef& r : e.region) {
    if (r.is_flow)
      flow_refs.push_back(r.str());
    else
      stages.push_back(r.stage);
  }
  std::sort(stages.begin(), stages.end());
  stages.erase(std::unique(stages.begin(), stages.end()), stages.end());
  std::sort(flow_refs.begin(), flow_refs.end());
  flow_refs.erase(std::unique(flow_refs.begin(), flow_refs.end()),
                  flow_refs.end());

  std::string out = "event " + e.name + " { region:";
  bool first = true;
  for (const StageRef& s : stages) {
    out += first ? " " : ", ";
    out += s.str();
    first = false;
  }
  for (const std::string& f : flow_refs) {
    out += first ? " " : ", ";
    out += f;
    first = false;
  }
  out += " ; duration: " + std::to_string(e.duration) + " }";
  return out;
}

}  // namespace detail

// Canonical textual form. Parsing the result reproduces the model exactly,
// and two models are interchangeable iff their canonical forms match.
// Layout: one declaration per line, sections separated by blank lines,
// machines in declaration order (pre-order), everything else sorted.
inline std::string canonical_print(const Model& model) {
  std::ostringstream out;
  out << "model " << model.name << "\n";

  std::vector<const Machine*> machines = machines_preorder(model);
  machines.erase(machines.begin());  // root is implicit in the model line
  if (!machines.empty()) {
    out << "\n";
    for (const Machine* m : machines) {
      out << "machine " << m->path << " {";
      bool first = true;
      for (StageKind k : kStageKinds) {
        if (!m->has_stage(k)) continue;
        out << (first ? " " : ", ") << to_string(k);
        first = false;
      }
      out << (first ? " }" : " }") << "\n";
    }
  }

  if (!model.things.empty()) {
    std::vector<std::string> names;
    for (const ThingKind& t : model.things) names.push_back(t.name);
    std::sort(names.begin(), names.end());
    out << "\n";
    for (const std::string& n : names) out << "thing " << n << "\n";
  }

  if (!model.flows.empty()) {
    std::vector<std::string> lines;
    for (const Flow& f : model.flows) lines.push_back(detail::flow_line(f));
    std::sort(lines.begin(), lines.end());
    out << "\n";
    for (const std::string& l : lines) out << l << "\n";
  }

  if (!model.triggers.empty()) {
    std::vector<std::string> lines;
    for (const Trigger& t : model.triggers)
      lines.push_back(detail::trigger_line(t));
    std::sort(lines.begin(), lines.end());
    out << "\n";
    for (const std::string& l : lines) out << l << "\n";
  }

  if (!model.events.empty()) {
    std::vector<const Event*> evs;
    for (const Event& e : model.events) evs.push_back(&e);
    std::sort(evs.begin(), evs.end(), [](const Event* a, const Event* b) {
      return a->name < b->name;
    });
    out << "\n";
    for (const Event* e : evs) out << detail::event_line(*e) << "\n";
  }

  if (!model.chronology.edges.empty()) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const ChronologyEdge& e : model.chronology.edges)
      edges.emplace_back(e.before, e.after);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out << "\nchronology {";
    for (size_t i = 0; i < edges.size(); ++i) {
      out << (i ? " ; " : " ");
      out << edges[i].first << " -> " << edges[i].second;
    }
    out << " }\n";
  }

  return out.str();
}

// Structural equality up to canonical form; source spans never count.
inline bool models_equal(const Model& a, const Model& b) {
  return canonical_print(a) == canonical_print(b);
}

}  // namespace tml
