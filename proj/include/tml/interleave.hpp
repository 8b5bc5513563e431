#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tml/config.hpp"
#include "tml/diagnostics.hpp"
#include "tml/model.hpp"
#include "tml/sim.hpp"

namespace tml {

struct InterleaveStep {
  StageRef stage;
  std::string thing;

  friend bool operator==(const InterleaveStep&,
                         const InterleaveStep&) = default;
  friend bool operator<(const InterleaveStep& a, const InterleaveStep& b) {
    if (!(a.stage == b.stage)) return a.stage < b.stage;
    return a.thing < b.thing;
  }
};

using Interleaving = std::vector<InterleaveStep>;

// A trace stripped down to what the interleaving enumerator speaks:
// the firing order, without ticks and without retirement rows.
inline Interleaving projection(const Trace& trace) {
  Interleaving out;
  for (const Firing& f : trace.firings)
    if (f.cause != Cause::Retired) out.push_back({f.stage, f.thing});
  return out;
}

namespace detail {

struct ITokens {
  struct Token {
    std::string kind;
    std::string id;
    StageRef stage;
    bool live = false;
    std::set<StageRef> armed;
  };
  std::vector<Token> tokens;
  std::vector<StageRef> pending;  // creates not yet fired
  std::map<std::string, int> counters;
  Interleaving seq;
};

}  // namespace detail

// Every order in which the model's stages can fire, ignoring time:
// causality alone (flows, triggers, gates) constrains the sequences.
// Tokens advance one stage per step; every choice point branches. This
// deliberately shares no machinery with simulate() so the two can check
// each other. Throws budget-exceeded when a sequence would grow past
// `budget` firings or the sequence set grows past `max_sequences`.
inline std::vector<Interleaving> enumerate_interleavings(
    const Model& model, const SimConfig& cfg, int budget = 12,
    size_t max_sequences = 200000) {
  std::map<StageRef, std::vector<const Flow*>> flows_from;
  for (const Flow& f : model.flows) flows_from[f.source].push_back(&f);
  std::map<StageRef, std::vector<const Trigger*>> triggers_from;
  std::set<StageRef> gated;
  for (const Trigger& t : model.triggers) {
    triggers_from[t.source].push_back(&t);
    if (t.target.kind == StageKind::Transfer) gated.insert(t.target);
  }

  std::set<Interleaving> found;

  detail::ITokens init;
  for (const Spawn& s : cfg.spawns)
    for (int c = 0; c < s.count; ++c) init.pending.push_back(s.stage);

  // Departure effects shared by moving and retiring.
  auto depart = [&](detail::ITokens& st, size_t ti) {
    auto& tok = st.tokens[ti];
    auto it = triggers_from.find(tok.stage);
    if (it == triggers_from.end()) return;
    for (const Trigger* t : it->second) {
      if (t->target.kind == StageKind::Create)
        st.pending.push_back(t->target);
      else
        tok.armed.insert(t->target);
    }
  };

  std::function<void(detail::ITokens)> walk = [&](detail::ITokens st) {
    if (static_cast<int>(st.seq.size()) > budget)
      throw Error("budget-exceeded",
                  "an interleaving exceeds " + std::to_string(budget) +
                      " firings");

    // Forced silent steps first: tokens with nowhere to go depart and
    // retire without firing anything. Their trigger effects are ordering-
    // relevant, so retirement of a trigger-sourcing token branches below
    // instead of being folded here.
    bool acted = true;
    while (acted) {
      acted = false;
      for (size_t i = 0; i < st.tokens.size(); ++i) {
        auto& tok = st.tokens[i];
        if (!tok.live) continue;
        if (triggers_from.count(tok.stage)) continue;
        bool rejected = (tok.stage.kind == StageKind::Accept ||
                         tok.stage.kind == StageKind::Receive) &&
                        cfg.accept_policy(tok.stage.path) ==
                            AcceptPolicy::Never;
        bool any_match = false;
        if (!rejected) {
          auto it = flows_from.find(tok.stage);
          if (it != flows_from.end())
            for (const Flow* f : it->second)
              if (f->thing == tok.kind) any_match = true;
        }
        if (rejected || !any_match) {
          tok.live = false;
          acted = true;
        }
      }
    }

    bool branched = false;

    // Spawn one of the pending creates (distinct stages only; identical
    // pending entries are interchangeable).
    std::set<StageRef> seen;
    for (size_t p = 0; p < st.pending.size(); ++p) {
      if (!seen.insert(st.pending[p]).second) continue;
      detail::ITokens next = st;
      StageRef at = next.pending[p];
      next.pending.erase(next.pending.begin() + p);
      detail::ITokens::Token tok;
      tok.kind = detail::spawn_kind(model, at);
      tok.id = tok.kind + "#" + std::to_string(++next.counters[tok.kind]);
      tok.stage = at;
      tok.live = true;
      next.seq.push_back({at, tok.id});
      next.tokens.push_back(std::move(tok));
      branched = true;
      walk(std::move(next));
    }

    // Advance one live token along one eligible flow, or let a trigger-
    // sourcing dead-end token depart (its creations become pending).
    for (size_t i = 0; i < st.tokens.size(); ++i) {
      const auto& tok = st.tokens[i];
      if (!tok.live) continue;
      bool rejected = (tok.stage.kind == StageKind::Accept ||
                       tok.stage.kind == StageKind::Receive) &&
                      cfg.accept_policy(tok.stage.path) ==
                          AcceptPolicy::Never;
      std::vector<const Flow*> eligible;
      bool any_match = false;
      if (!rejected) {
        auto it = flows_from.find(tok.stage);
        if (it != flows_from.end()) {
          for (const Flow* f : it->second) {
            if (f->thing != tok.kind) continue;
            any_match = true;
            if (gated.count(f->target) && !tok.armed.count(f->target))
              continue;
            eligible.push_back(f);
          }
        }
      }
      if (rejected || !any_match) {
        // Dead end with triggers attached: departing is a distinct step.
        detail::ITokens next = st;
        depart(next, i);
        next.tokens[i].live = false;
        branched = true;
        walk(std::move(next));
        continue;
      }
      for (const Flow* f : eligible) {
        detail::ITokens next = st;
        depart(next, i);
        next.tokens[i].stage = f->target;
        next.seq.push_back({f->target, next.tokens[i].id});
        branched = true;
        walk(std::move(next));
      }
    }

    if (!branched) {
      found.insert(std::move(st.seq));
      if (found.size() > max_sequences)
        throw Error("budget-exceeded",
                    "more than " + std::to_string(max_sequences) +
                        " distinct interleavings");
    }
  };
  walk(std::move(init));

  return std::vector<Interleaving>(found.begin(), found.end());
}

inline bool contains(const std::vector<Interleaving>& set,
                     const Interleaving& seq) {
  return std::find(set.begin(), set.end(), seq) != set.end();
}

}  // namespace tml
