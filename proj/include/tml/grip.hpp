#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/model.hpp"

namespace tml {

inline bool path_in_subtree(std::string_view path, std::string_view root) {
  if (path == root) return true;
  return path.size() > root.size() && path.substr(0, root.size()) == root &&
         path[root.size()] == '.';
}

namespace detail {

inline bool touches_fold(const StageRef& r,
                         const std::vector<std::string>& folded) {
  for (const std::string& f : folded)
    if (path_in_subtree(r.path, f)) return true;
  return false;
}

// Rebuild the visible model: folded machines become empty shells and
// everything referring into their subtrees drops out.
inline Model apply_folds(const Model& original,
                         const std::vector<std::string>& folded) {
  Model m = original;
  for (const std::string& path : folded) {
    Machine* target = m.root.find(path);
    target->stages.clear();
    target->submachines.clear();
  }
  std::erase_if(m.flows, [&](const Flow& f) {
    return touches_fold(f.source, folded) || touches_fold(f.target, folded);
  });
  std::erase_if(m.triggers, [&](const Trigger& t) {
    return touches_fold(t.source, folded) || touches_fold(t.target, folded);
  });
  std::erase_if(m.events, [&](const Event& e) {
    for (const StageRef& s : region_stages(e))
      if (touches_fold(s, folded)) return true;
    return false;
  });
  std::erase_if(m.chronology.edges, [&](const ChronologyEdge& e) {
    return !m.find_event(e.before) || !m.find_event(e.after);
  });
  return m;
}

}  // namespace detail

// A model under adjustable grip: any submachine can be folded into an
// opaque box and later unfolded back. The original is kept pristine so
// fold followed by unfold restores it exactly.
struct FoldView {
  Model original;
  std::vector<std::string> folded;  // sorted machine paths
  Model model;                      // the visible model
};

inline FoldView make_fold_view(const Model& m) {
  return FoldView{m, {}, m};
}

inline void fold(FoldView& view, const std::string& path) {
  if (path.empty()) throw Error("cannot-fold-root", "cannot fold the root");
  if (!view.original.find_machine(path))
    throw Error("path-not-found", "no machine " + path + " in the model");
  for (const std::string& f : view.folded)
    if (path_in_subtree(path, f) || path_in_subtree(f, path))
      throw Error("fold-overlap",
                  "machine " + path + " overlaps folded machine " + f);
  view.folded.push_back(path);
  std::sort(view.folded.begin(), view.folded.end());
  view.model = detail::apply_folds(view.original, view.folded);
}

inline void unfold(FoldView& view, const std::string& path) {
  if (!view.original.find_machine(path))
    throw Error("path-not-found", "no machine " + path + " in the model");
  auto it = std::find(view.folded.begin(), view.folded.end(), path);
  if (it == view.folded.end())
    throw Error("path-not-folded", "machine " + path + " is not folded");
  view.folded.erase(it);
  view.model = detail::apply_folds(view.original, view.folded);
}

// An arc crossing a fold boundary, as seen from outside: `inside` lies
// within the folded subtree, `outside` does not.
struct BoundaryArc {
  bool is_flow = true;
  std::string thing;  // empty for triggers
  StageRef outside;
  StageRef inside;
  bool inbound = false;  // true when the arc points into the fold

  std::string str(const std::string& fold_path) const {
    std::string head = is_flow ? "flow " + thing + " : " : "trigger ";
    std::string box = "[" + fold_path + "]";
    return inbound ? head + outside.str() + " -> " + box
                   : head + box + " -> " + outside.str();
  }
};

inline std::vector<BoundaryArc> boundary_arcs(const Model& original,
                                              const std::string& path) {
  std::vector<BoundaryArc> out;
  auto inside = [&](const StageRef& r) {
    return path_in_subtree(r.path, path);
  };
  for (const Flow& f : original.flows) {
    bool s = inside(f.source), t = inside(f.target);
    if (s == t) continue;
    out.push_back({true, f.thing, s ? f.target : f.source,
                   s ? f.source : f.target, t});
  }
  for (const Trigger& tr : original.triggers) {
    bool s = inside(tr.source), t = inside(tr.target);
    if (s == t) continue;
    out.push_back({false, "", s ? tr.target : tr.source,
                   s ? tr.source : tr.target, t});
  }
  std::sort(out.begin(), out.end(),
            [&](const BoundaryArc& a, const BoundaryArc& b) {
              return a.str(path) < b.str(path);
            });
  return out;
}

}  // namespace tml
