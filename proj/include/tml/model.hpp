#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tml {

// The six stage kinds plus the fused Receive form. Enum order is the
// canonical stage order used everywhere (printing, tie-breaks, iteration).
enum class StageKind {
  Create,
  Receive,
  Arrive,
  Accept,
  Process,
  Release,
  Transfer,
};

inline constexpr std::array<StageKind, 7> kStageKinds = {
    StageKind::Create,  StageKind::Receive, StageKind::Arrive,
    StageKind::Accept,  StageKind::Process, StageKind::Release,
    StageKind::Transfer,
};

constexpr std::string_view to_string(StageKind k) {
  switch (k) {
    case StageKind::Create:   return "create";
    case StageKind::Receive:  return "receive";
    case StageKind::Arrive:   return "arrive";
    case StageKind::Accept:   return "accept";
    case StageKind::Process:  return "process";
    case StageKind::Release:  return "release";
    case StageKind::Transfer: return "transfer";
  }
  return "?";
}

constexpr int kind_index(StageKind k) { return static_cast<int>(k); }

inline std::optional<StageKind> stage_kind_from(std::string_view s) {
  for (StageKind k : kStageKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

// A stage reference: machine path + stage kind. Machine paths are
// root-relative dot chains ("hand.grasp"); the empty path denotes the root
// machine (the grand machine), which is a pure container and owns no stages.
struct StageRef {
  std::string path;
  StageKind kind = StageKind::Create;

  std::string str() const {
    return path.empty() ? std::string(to_string(kind))
                        : path + "." + std::string(to_string(kind));
  }

  friend bool operator==(const StageRef&, const StageRef&) = default;
  friend bool operator<(const StageRef& a, const StageRef& b) {
    if (a.path != b.path) return a.path < b.path;
    return kind_index(a.kind) < kind_index(b.kind);
  }
};

struct Machine {
  std::string name;
  std::string path;                  // root-relative; "" for the root
  std::vector<StageKind> stages;     // canonical order, at most one per kind
  std::vector<Machine> submachines;  // declaration order
  std::optional<SourceSpan> span;

  bool has_stage(StageKind k) const {
    return std::find(stages.begin(), stages.end(), k) != stages.end();
  }

  const Machine* find(std::string_view rel) const {
    if (rel.empty()) return this;
    auto dot = rel.find('.');
    std::string_view head = rel.substr(0, dot);
    for (const Machine& m : submachines)
      if (m.name == head)
        return dot == std::string_view::npos ? &m : m.find(rel.substr(dot + 1));
    return nullptr;
  }

  Machine* find(std::string_view rel) {
    return const_cast<Machine*>(std::as_const(*this).find(rel));
  }
};

inline std::string parent_path(std::string_view path) {
  auto dot = path.rfind('.');
  return dot == std::string_view::npos ? std::string()
                                       : std::string(path.substr(0, dot));
}

inline std::string leaf_name(std::string_view path) {
  auto dot = path.rfind('.');
  return std::string(dot == std::string_view::npos ? path
                                                   : path.substr(dot + 1));
}

struct ThingKind {
  std::string name;
  std::optional<SourceSpan> span;
};

struct Flow {
  std::string thing;
  StageRef source;
  StageRef target;
  std::optional<SourceSpan> span;

  friend bool operator==(const Flow& a, const Flow& b) {
    return a.thing == b.thing && a.source == b.source && a.target == b.target;
  }
};

struct Trigger {
  StageRef source;
  StageRef target;
  std::optional<SourceSpan> span;

  friend bool operator==(const Trigger& a, const Trigger& b) {
    return a.source == b.source && a.target == b.target;
  }
};

// An event region member: either a stage or one of the model's flows.
// A flow reference implicitly places both of its endpoint stages in the
// region as well.
struct RegionRef {
  bool is_flow = false;
  StageRef stage;      // when !is_flow
  std::string thing;   // when is_flow
  StageRef source;
  StageRef target;

  std::string str() const {
    if (!is_flow) return stage.str();
    return thing + " : " + source.str() + " -> " + target.str();
  }

  friend bool operator==(const RegionRef& a, const RegionRef& b) {
    if (a.is_flow != b.is_flow) return false;
    if (!a.is_flow) return a.stage == b.stage;
    return a.thing == b.thing && a.source == b.source && a.target == b.target;
  }
};

struct Event {
  std::string name;
  std::vector<RegionRef> region;  // non-empty
  int duration = 1;               // ticks, >= 1
  std::optional<SourceSpan> span;
};

struct ChronologyEdge {
  std::string before;
  std::string after;
  std::optional<SourceSpan> span;
};

struct Chronology {
  std::vector<ChronologyEdge> edges;
};

// A resolved stage: the owning machine plus the kind.
struct Stage {
  const Machine* machine = nullptr;
  StageKind kind = StageKind::Create;

  StageRef ref() const { return {machine->path, kind}; }
};

// The grand machine: the whole static model.
struct Model {
  std::string name;
  Machine root;  // root.name == name, root.path == ""
  std::vector<ThingKind> things;
  std::vector<Flow> flows;
  std::vector<Trigger> triggers;
  std::vector<Event> events;
  Chronology chronology;

  const Machine* find_machine(std::string_view path) const {
    return root.find(path);
  }

  bool has_thing(std::string_view name) const {
    for (const ThingKind& t : things)
      if (t.name == name) return true;
    return false;
  }

  const Event* find_event(std::string_view name) const {
    for (const Event& e : events)
      if (e.name == name) return &e;
    return nullptr;
  }
};

inline std::optional<Stage> resolve_stage(const Model& model,
                                          const StageRef& ref) {
  const Machine* m = model.find_machine(ref.path);
  if (!m || !m->has_stage(ref.kind)) return std::nullopt;
  return Stage{m, ref.kind};
}

// Pre-order traversal, root included.
inline void for_each_machine(const Machine& m,
                             const std::function<void(const Machine&)>& fn) {
  fn(m);
  for (const Machine& sub : m.submachines) for_each_machine(sub, fn);
}

inline std::vector<const Machine*> machines_preorder(const Model& model) {
  std::vector<const Machine*> out;
  for_each_machine(model.root,
                   [&](const Machine& m) { out.push_back(&m); });
  return out;
}

// All stages of the model: machines in pre-order, kinds in canonical order.
inline std::vector<StageRef> all_stages(const Model& model) {
  std::vector<StageRef> out;
  for_each_machine(model.root, [&](const Machine& m) {
    for (StageKind k : kStageKinds)
      if (m.has_stage(k)) out.push_back({m.path, k});
  });
  return out;
}

// Region stages with flow endpoints included.
inline std::vector<StageRef> region_stages(const Event& event) {
  std::vector<StageRef> out;
  auto add = [&](const StageRef& r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  for (const RegionRef& r : event.region) {
    if (r.is_flow) {
      add(r.source);
      add(r.target);
    } else {
      add(r.stage);
    }
  }
  return out;
}

}  // namespace tml
