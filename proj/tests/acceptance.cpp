// Acceptance gate: one timed pass/fail line per criterion, nonzero exit
// if anything fails. Each criterion states an end-to-end guarantee of the
// toolchain; the unit suite covers the fine grain.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gen.hpp"
#include "tml/tm.hpp"

namespace {

using tml::Model;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Model load_model(const std::string& path) {
  tml::ParseResult r = tml::parse(slurp(path));
  if (!r.ok()) throw std::runtime_error(path + " does not parse");
  return *r.model;
}

tml::SimConfig load_config(const std::string& path, const Model& m) {
  tml::ConfigResult r = tml::parse_config(slurp(path), m);
  if (!r.ok()) throw std::runtime_error(path + " does not parse");
  return *r.config;
}

const std::vector<std::string> kCorpus = {"person", "hammer", "chalice"};

std::string corpus_path(const std::string& name, const char* ext) {
  return std::string(CORPUS_DIR) + "/" + name + ext;
}

std::vector<std::string> error_codes(const std::vector<tml::Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const tml::Diagnostic& d : ds)
    if (d.severity == tml::Severity::Error) out.push_back(d.code);
  return out;
}

bool fail(std::string& why, const std::string& message) {
  if (why.empty()) why = message;
  return false;
}

// --- 1: the corpus is well-formed -----------------------------------------

bool corpus_is_valid(std::string& why) {
  for (const std::string& name : kCorpus) {
    Model m = load_model(corpus_path(name, ".tm"));
    std::vector<std::string> errs = error_codes(tml::validate(m));
    if (!errs.empty())
      return fail(why, name + " has validation errors, first " + errs[0]);
  }
  Model person = load_model(corpus_path("person", ".tm"));
  if (person.root.submachines.size() != 4)
    return fail(why, "person root holds " +
                         std::to_string(person.root.submachines.size()) +
                         " machines, want 4");
  return true;
}

// --- 2: print/parse round trip --------------------------------------------

bool round_trip_holds(std::string& why) {
  std::vector<Model> models;
  for (const std::string& name : kCorpus)
    models.push_back(load_model(corpus_path(name, ".tm")));
  for (unsigned seed = 1; seed <= 200; ++seed) {
    testgen::Gen g(seed);
    models.push_back(g.model());
  }
  for (size_t i = 0; i < models.size(); ++i) {
    std::string label = i < kCorpus.size()
                            ? kCorpus[i]
                            : "generated #" + std::to_string(i - 2);
    std::string printed = tml::canonical_print(models[i]);
    tml::ParseResult r = tml::parse(printed);
    if (!r.ok()) return fail(why, label + ": printed form does not reparse");
    if (!tml::models_equal(*r.model, models[i]))
      return fail(why, label + ": reparsed model differs");
    if (tml::canonical_print(*r.model) != printed)
      return fail(why, label + ": printing is not idempotent");
  }
  return true;
}

// --- 3: flow legality ------------------------------------------------------

struct Arc {
  const char* label;
  std::string stages_a, stages_b;  // stages_b empty = one machine
  std::string source, target;
};

bool rules_separate_good_from_bad(std::string& why) {
  const std::vector<Arc> lattice = {
      {"create->process", "create, process", "", "a.create", "a.process"},
      {"create->release", "create, release, transfer", "", "a.create",
       "a.release"},
      {"receive->process", "receive, process", "", "a.receive", "a.process"},
      {"receive->release", "receive, release, transfer", "", "a.receive",
       "a.release"},
      {"arrive->accept", "arrive, accept", "", "a.arrive", "a.accept"},
      {"accept->process", "arrive, accept, process", "", "a.accept",
       "a.process"},
      {"accept->release", "arrive, accept, release, transfer", "",
       "a.accept", "a.release"},
      {"process->release", "process, release, transfer", "", "a.process",
       "a.release"},
      {"release->transfer", "release, transfer", "", "a.release",
       "a.transfer"},
      {"transfer->receive", "transfer, receive", "", "a.transfer",
       "a.receive"},
      {"transfer->arrive", "transfer, arrive, accept", "", "a.transfer",
       "a.arrive"},
      {"transfer->transfer", "transfer", "transfer", "a.transfer",
       "b.transfer"},
  };
  auto build = [](const Arc& c, bool reversed) {
    std::string text = "model adj\nmachine a { " + c.stages_a + " }\n";
    if (!c.stages_b.empty()) text += "machine b { " + c.stages_b + " }\n";
    text += "thing t\nflow t : ";
    text += reversed ? c.target + " -> " + c.source
                     : c.source + " -> " + c.target;
    return text + "\n";
  };
  auto errors_of = [](const std::string& text) {
    tml::ParseResult r = tml::parse(text);
    if (!r.ok()) throw std::runtime_error("lattice model does not parse");
    return error_codes(tml::validate(*r.model));
  };

  for (const Arc& c : lattice) {
    if (!errors_of(build(c, false)).empty())
      return fail(why, std::string(c.label) + ": legal arc rejected");
    if (c.stages_b.empty()) {  // reversed cross arc is itself legal
      std::vector<std::string> errs = errors_of(build(c, true));
      if (errs != std::vector<std::string>{"illegal-adjacency"})
        return fail(why, std::string(c.label) +
                             ": reversed arc not rejected exactly once");
    }
  }
  // Sideways across machines: only transfers may cross.
  std::vector<std::string> errs = errors_of(
      "model adj\nmachine a { release, transfer }\nmachine b { receive }\n"
      "thing t\nflow t : a.release -> b.receive\n");
  if (errs != std::vector<std::string>{"boundary-violation"})
    return fail(why, "sideways crossing not rejected exactly once");

  const std::map<std::string, std::vector<std::string>> mutants = {
      {"bad-adjacency", {"illegal-adjacency"}},
      {"bad-boundary", {"boundary-violation"}},
      {"bad-chronology", {}},
  };
  for (const auto& [name, want] : mutants) {
    Model m = load_model(std::string(MUTANTS_DIR) + "/" + name + ".tm");
    if (error_codes(tml::validate(m)) != want)
      return fail(why, name + " did not fail for exactly its one reason");
  }
  return true;
}

// --- 4: chronology against the person run ----------------------------------

bool person_chronology_holds(std::string& why) {
  Model m = load_model(corpus_path("person", ".tm"));
  tml::Trace t = tml::simulate(m, load_config(corpus_path("person", ".cfg"),
                                              m));
  std::map<std::string, int> starts = tml::first_starts(m, t);
  for (const char* e :
       {"person_appears", "eats", "name_given", "goes_to_work"})
    if (!starts.count(e))
      return fail(why, std::string(e) + " never occurred");
  for (const char* later : {"eats", "name_given", "goes_to_work"})
    if (starts["person_appears"] >= starts[later])
      return fail(why, std::string("person_appears does not precede ") +
                           later);
  if (!error_codes(tml::check_chronology(m, t)).empty())
    return fail(why, "declared chronology is violated");
  return true;
}

// --- 5: event windows on the hammer run -------------------------------------

bool hammer_windows_nest(std::string& why) {
  Model m = load_model(corpus_path("hammer", ".tm"));
  tml::Trace t = tml::simulate(m, load_config(corpus_path("hammer", ".cfg"),
                                              m));
  tml::Occurrence grasp{};
  int movement_start = 0;
  for (const tml::Occurrence& o : tml::occurrences(m, t)) {
    if (o.event == "grasp" && grasp.event.empty()) grasp = o;
    if (o.event == "movement" && movement_start == 0)
      movement_start = o.start;
  }
  if (grasp.event.empty() || movement_start == 0)
    return fail(why, "grasp or movement never occurred");
  if (movement_start < grasp.start || movement_start > grasp.end)
    return fail(why, "movement does not start inside the grasp window");
  int first_ungrasp = 0;
  for (const tml::Firing& f : t.firings)
    if (f.cause != tml::Cause::Retired &&
        tml::path_in_subtree(f.stage.path, "hand.ungrasp")) {
      first_ungrasp = f.tick;
      break;
    }
  if (first_ungrasp != grasp.end)
    return fail(why, "the grip is not handed over the moment grasp ends (" +
                         std::to_string(first_ungrasp) + " vs " +
                         std::to_string(grasp.end) + ")");
  return true;
}

// --- 6: the timed run is one admissible order --------------------------------

bool timed_run_is_admissible(std::string& why) {
  struct Case {
    std::string name;
    std::vector<std::string> folds;
  };
  const std::vector<Case> cases = {
      {"person", {}},
      {"hammer", {"hammer", "nail", "stuff"}},
      {"chalice", {"vessel"}},
  };
  for (const Case& c : cases) {
    Model full = load_model(corpus_path(c.name, ".tm"));
    tml::FoldView view = tml::make_fold_view(full);
    for (const std::string& p : c.folds) tml::fold(view, p);
    const Model& m = view.model;
    tml::SimConfig cfg = load_config(corpus_path(c.name, ".cfg"), m);
    std::vector<tml::Interleaving> all =
        tml::enumerate_interleavings(m, cfg, 12);
    if (all.empty()) return fail(why, c.name + ": no interleavings found");
    if (!tml::contains(all, tml::projection(tml::simulate(m, cfg))))
      return fail(why, c.name + ": the timed run is not in the " +
                           std::to_string(all.size()) + " admissible orders");
  }

  // A single pipeline admits exactly one order.
  tml::ParseResult r = tml::parse(
      "model line\n"
      "machine a { create, process, release, transfer }\n"
      "machine b { transfer, receive, process }\n"
      "thing item\n"
      "flow item : a.create -> a.process\n"
      "flow item : a.process -> a.release\n"
      "flow item : a.release -> a.transfer\n"
      "flow item : a.transfer -> b.transfer\n"
      "flow item : b.transfer -> b.receive\n"
      "flow item : b.receive -> b.process\n");
  if (!r.ok()) throw std::runtime_error("pipeline model does not parse");
  tml::ConfigResult cfg = tml::parse_config("spawn = a.create @ 1\n",
                                            *r.model);
  std::vector<tml::Interleaving> all =
      tml::enumerate_interleavings(*r.model, *cfg.config, 12);
  if (all.size() != 1)
    return fail(why, "pipeline admits " + std::to_string(all.size()) +
                         " orders, want exactly 1");
  return true;
}

// --- 7: determinism ----------------------------------------------------------

bool simulation_is_deterministic(std::string& why) {
  for (const std::string& name : kCorpus) {
    Model m = load_model(corpus_path(name, ".tm"));
    tml::SimConfig cfg = load_config(corpus_path(name, ".cfg"), m);
    std::string reference = tml::trace_jsonl(tml::simulate(m, cfg));
    for (int i = 1; i < 100; ++i)
      if (tml::trace_jsonl(tml::simulate(m, cfg)) != reference)
        return fail(why, name + ": run " + std::to_string(i) + " differs");
  }
  return true;
}

// --- 8: folding is lossless and faithfully drawn ------------------------------

bool folding_is_lossless(std::string& why) {
  for (const std::string& name : kCorpus) {
    Model m = load_model(corpus_path(name, ".tm"));
    size_t total_stages = tml::all_stages(m).size();
    for (const tml::Machine* mm : tml::machines_preorder(m)) {
      if (mm->path.empty()) continue;  // the root itself cannot fold
      const std::string& path = mm->path;
      std::string label = name + "/" + path;

      tml::FoldView view = tml::make_fold_view(m);
      tml::fold(view, path);
      tml::unfold(view, path);
      if (!tml::models_equal(view.model, m))
        return fail(why, label + ": unfold(fold(m)) differs from m");

      size_t hidden = 0;
      tml::for_each_machine(*m.find_machine(path),
                            [&](const tml::Machine& sub) {
                              hidden += sub.stages.size();
                            });
      std::string dot = tml::to_dot(m, {{path}, ""});
      size_t nodes = 0;
      for (size_t at = dot.find(", shape="); at != std::string::npos;
           at = dot.find(", shape=", at + 1))
        ++nodes;
      if (nodes != total_stages - hidden + 1)
        return fail(why, label + ": drawn nodes " + std::to_string(nodes) +
                             ", want " +
                             std::to_string(total_stages - hidden + 1));

      // Degree of the box: endpoints only, as edge labels may contain
      // the same text as the machine path.
      size_t degree = 0;
      std::istringstream in(dot);
      for (std::string line; std::getline(in, line);) {
        size_t arrow = line.find("\" -> \"");
        if (arrow == std::string::npos) continue;
        size_t q1 = line.find('"');
        std::string src = line.substr(q1 + 1, arrow - q1 - 1);
        size_t tgt_at = arrow + 6;
        std::string tgt =
            line.substr(tgt_at, line.find('"', tgt_at) - tgt_at);
        degree += (src == path) + (tgt == path);
      }
      size_t boundary = tml::boundary_arcs(m, path).size();
      if (degree != boundary)
        return fail(why, label + ": box degree " + std::to_string(degree) +
                             " != boundary arcs " + std::to_string(boundary));
    }
  }
  return true;
}

// --- 9: conservation ----------------------------------------------------------

bool things_are_conserved(std::string& why) {
  for (const std::string& name : kCorpus) {
    Model m = load_model(corpus_path(name, ".tm"));
    tml::Trace t = tml::simulate(m, load_config(corpus_path(name, ".cfg"),
                                                m));
    if (t.exhausted) return fail(why, name + ": run did not quiesce");
    int born = 0, retired = 0;
    for (const tml::Firing& f : t.firings) {
      if (f.cause == tml::Cause::Spawn || f.cause == tml::Cause::Trigger)
        ++born;
      if (f.cause == tml::Cause::Retired) ++retired;
    }
    int live = static_cast<int>(
        tml::state_at(m, t, t.horizon).positions.size());
    if (born != retired + live)
      return fail(why, name + ": born " + std::to_string(born) +
                           " != retired " + std::to_string(retired) +
                           " + live " + std::to_string(live));
  }
  return true;
}

struct Criterion {
  const char* name;
  double limit_seconds;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"corpus models validate and person has four submachines", 1,
       corpus_is_valid},
      {"printing and reparsing reproduces 203 models exactly", 10,
       round_trip_holds},
      {"adjacency and boundary rules separate good arcs from bad", 1,
       rules_separate_good_from_bad},
      {"the person run obeys its declared chronology", 1,
       person_chronology_holds},
      {"hammer event windows nest and hand over on time", 1,
       hammer_windows_nest},
      {"every timed run is one of its model's admissible orders", 30,
       timed_run_is_admissible},
      {"100 repeated simulations per model are byte-identical", 10,
       simulation_is_deterministic},
      {"every fold is lossless and drawn with true degree", 5,
       folding_is_lossless},
      {"everything spawned is retired or still standing", 1,
       things_are_conserved},
  };

  bool all_ok = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    std::string why;
    bool ok = false;
    auto begin = std::chrono::steady_clock::now();
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      begin)
            .count();
    if (ok && seconds > c.limit_seconds) {
      ok = false;
      why = "over the time limit";
    }
    std::string detail = ok ? "" : (why.empty() ? " — failed" : " — " + why);
    std::printf("%s  %zu) %s (%.2fs, limit %.0fs)%s\n",
                ok ? "PASS" : "FAIL", i + 1, c.name, seconds,
                c.limit_seconds, detail.c_str());
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
