#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/model.hpp"

namespace tml {

struct NormalizeResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

enum class ReceiveForm { Fuse, Unfuse };

namespace detail {

inline void remap_ref(StageRef& r, const StageRef& from, const StageRef& to) {
  if (r == from) r = to;
}

inline void dedupe_region(Event& e) {
  std::vector<RegionRef> out;
  for (const RegionRef& r : e.region)
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  e.region = std::move(out);
}

inline void dedupe_arcs(Model& m) {
  std::vector<Flow> flows;
  for (const Flow& f : m.flows)
    if (std::find(flows.begin(), flows.end(), f) == flows.end())
      flows.push_back(f);
  m.flows = std::move(flows);
  std::vector<Trigger> triggers;
  for (const Trigger& t : m.triggers)
    if (std::find(triggers.begin(), triggers.end(), t) == triggers.end())
      triggers.push_back(t);
  m.triggers = std::move(triggers);
}

inline void set_stages(Machine& m, StageKind remove_a, StageKind remove_b,
                       std::vector<StageKind> add) {
  std::erase_if(m.stages, [&](StageKind k) {
    return k == remove_a || k == remove_b;
  });
  for (StageKind k : add)
    if (!m.has_stage(k)) m.stages.push_back(k);
  std::sort(m.stages.begin(), m.stages.end(),
            [](StageKind a, StageKind b) {
              return kind_index(a) < kind_index(b);
            });
}

}  // namespace detail

// Collapse a machine's arrive/accept pair into the fused receive stage.
// Arcs, event regions and the interior arrive -> accept flows are rewired
// so the model means the same thing.
inline NormalizeResult fuse_receive(const Model& model,
                                    const std::string& path) {
  NormalizeResult result;
  const Machine* target = model.find_machine(path);
  if (!target) {
    result.diagnostics.push_back(
        {Severity::Error, "dangling-reference",
         "no machine " + path + " in the model", {}});
    return result;
  }
  if (!target->has_stage(StageKind::Arrive) ||
      !target->has_stage(StageKind::Accept)) {
    result.diagnostics.push_back(
        {Severity::Error, "cannot-fuse",
         "machine " + path + " has no arrive/accept pair to fuse", {}});
    return result;
  }
  StageRef arrive{path, StageKind::Arrive};
  StageRef accept{path, StageKind::Accept};
  StageRef receive{path, StageKind::Receive};
  for (const Flow& f : model.flows) {
    if (f.source == arrive && !(f.target == accept)) {
      result.diagnostics.push_back(
          {Severity::Error, "cannot-fuse",
           "machine " + path + " has a flow out of arrive that bypasses "
           "accept",
           f.span.value_or(SourceSpan{})});
      return result;
    }
  }

  Model m = model;
  detail::set_stages(*m.root.find(path), StageKind::Arrive,
                     StageKind::Accept, {StageKind::Receive});
  std::erase_if(m.flows, [&](const Flow& f) {
    return f.source == arrive && f.target == accept;
  });
  for (Flow& f : m.flows) {
    detail::remap_ref(f.source, arrive, receive);
    detail::remap_ref(f.source, accept, receive);
    detail::remap_ref(f.target, arrive, receive);
    detail::remap_ref(f.target, accept, receive);
  }
  for (Trigger& t : m.triggers) {
    detail::remap_ref(t.source, arrive, receive);
    detail::remap_ref(t.source, accept, receive);
    detail::remap_ref(t.target, arrive, receive);
    detail::remap_ref(t.target, accept, receive);
  }
  detail::dedupe_arcs(m);
  for (Event& e : m.events) {
    for (RegionRef& r : e.region) {
      if (r.is_flow) {
        bool was_interior = r.source == arrive && r.target == accept;
        if (was_interior) {
          r = RegionRef{false, receive, "", {}, {}};
          continue;
        }
        detail::remap_ref(r.source, arrive, receive);
        detail::remap_ref(r.source, accept, receive);
        detail::remap_ref(r.target, arrive, receive);
        detail::remap_ref(r.target, accept, receive);
      } else {
        detail::remap_ref(r.stage, arrive, receive);
        detail::remap_ref(r.stage, accept, receive);
      }
    }
    detail::dedupe_region(e);
  }
  result.model = std::move(m);
  return result;
}

// Split a machine's fused receive stage back into arrive and accept.
// Inbound arcs land on arrive, outbound arcs leave from accept, and one
// arrive -> accept flow is inserted per thing kind passing through
// (inbound kinds; outbound kinds when nothing flows in).
inline NormalizeResult unfuse_receive(const Model& model,
                                      const std::string& path) {
  NormalizeResult result;
  const Machine* target = model.find_machine(path);
  if (!target) {
    result.diagnostics.push_back(
        {Severity::Error, "dangling-reference",
         "no machine " + path + " in the model", {}});
    return result;
  }
  if (!target->has_stage(StageKind::Receive)) {
    result.diagnostics.push_back(
        {Severity::Error, "cannot-fuse",
         "machine " + path + " has no receive stage to split", {}});
    return result;
  }
  StageRef arrive{path, StageKind::Arrive};
  StageRef accept{path, StageKind::Accept};
  StageRef receive{path, StageKind::Receive};

  Model m = model;
  detail::set_stages(*m.root.find(path), StageKind::Receive,
                     StageKind::Receive, {StageKind::Arrive,
                                          StageKind::Accept});
  std::vector<std::string> inbound, outbound;
  for (Flow& f : m.flows) {
    if (f.target == receive) {
      f.target = arrive;
      if (std::find(inbound.begin(), inbound.end(), f.thing) ==
          inbound.end())
        inbound.push_back(f.thing);
    }
    if (f.source == receive) {
      f.source = accept;
      if (std::find(outbound.begin(), outbound.end(), f.thing) ==
          outbound.end())
        outbound.push_back(f.thing);
    }
  }
  const std::vector<std::string>& kinds =
      inbound.empty() ? outbound : inbound;
  std::vector<std::string> sorted_kinds = kinds;
  std::sort(sorted_kinds.begin(), sorted_kinds.end());
  for (const std::string& k : sorted_kinds)
    m.flows.push_back(Flow{k, arrive, accept, {}});
  for (Trigger& t : m.triggers) {
    detail::remap_ref(t.source, receive, accept);
    detail::remap_ref(t.target, receive, arrive);
  }
  detail::dedupe_arcs(m);
  for (Event& e : m.events) {
    std::vector<RegionRef> region;
    for (RegionRef r : e.region) {
      if (r.is_flow) {
        detail::remap_ref(r.source, receive, accept);
        detail::remap_ref(r.target, receive, arrive);
        region.push_back(r);
      } else if (r.stage == receive) {
        region.push_back(RegionRef{false, arrive, "", {}, {}});
        region.push_back(RegionRef{false, accept, "", {}, {}});
      } else {
        region.push_back(r);
      }
    }
    e.region = std::move(region);
    detail::dedupe_region(e);
  }
  result.model = std::move(m);
  return result;
}

// Whole-model normalization: fuse every arrive/accept pair into receive,
// or split every receive. Machines that cannot be fused are reported and
// left as they are; the rest are still converted.
inline NormalizeResult normalize_receive(const Model& model,
                                         ReceiveForm direction) {
  NormalizeResult result;
  result.model = model;
  std::vector<std::string> paths;
  for_each_machine(model.root, [&](const Machine& m) {
    bool wants = direction == ReceiveForm::Fuse
                     ? m.has_stage(StageKind::Arrive) &&
                           m.has_stage(StageKind::Accept)
                     : m.has_stage(StageKind::Receive);
    if (wants) paths.push_back(m.path);
  });
  for (const std::string& p : paths) {
    NormalizeResult step = direction == ReceiveForm::Fuse
                               ? fuse_receive(*result.model, p)
                               : unfuse_receive(*result.model, p);
    result.diagnostics.insert(result.diagnostics.end(),
                              step.diagnostics.begin(),
                              step.diagnostics.end());
    if (step.ok()) result.model = std::move(step.model);
  }
  sort_diagnostics(result.diagnostics);
  return result;
}

}  // namespace tml
