#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tml/model.hpp"

namespace tml {

enum class Severity { Error, Warning };

constexpr std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;     // stable machine-readable identifier
  std::string message;  // human-readable, names the offending construct
  SourceSpan span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

// Stable report order: position first, then code for same-position ties.
inline void sort_diagnostics(std::vector<Diagnostic>& ds) {
  std::stable_sort(ds.begin(), ds.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     if (a.span.line != b.span.line)
                       return a.span.line < b.span.line;
                     if (a.span.column != b.span.column)
                       return a.span.column < b.span.column;
                     return a.code < b.code;
                   });
}

// Thrown for contract violations (bad arguments, exhausted budgets) as
// opposed to problems with user input, which are reported as diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// One-paragraph explanation for every diagnostic code the toolchain can
// emit. Returns an empty string for unknown codes.
inline std::string explain(std::string_view code) {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"lexical-error",
       "The input contains a character that cannot start any token. Only "
       "identifiers, integers, punctuation (.{},:;->@), and '#' comments are "
       "recognized."},
      {"syntax-error",
       "A declaration does not match the grammar. Each line holds one "
       "declaration: model NAME | thing NAME | machine PATH { KIND, ... } | "
       "flow THING : REF -> REF | trigger REF -> REF | event NAME { region: "
       "REF, ... ; duration: N } | chronology { NAME -> NAME ; ... }"},
      {"duplicate-declaration",
       "The same machine path, thing name, or event name is declared twice. "
       "Every declaration introduces a distinct entity."},
      {"dangling-reference",
       "A flow, trigger, event region, or chronology entry names a machine "
       "path, stage, or event that is not declared anywhere in the model."},
      {"mixed-receive-form",
       "A machine declares receive together with arrive or accept. A machine "
       "uses either the fused receive stage or the arrive/accept pair, never "
       "both."},
      {"auto-created-parent",
       "A machine path mentions an ancestor that was never declared; an "
       "empty container machine was synthesized for it. Declare the parent "
       "explicitly to silence this warning."},
      {"illegal-adjacency",
       "A flow connects two stages in an order the stage lattice forbids. "
       "Within one machine the legal successors are: create -> process or "
       "release; receive -> process or release; arrive -> accept; accept -> "
       "process or release; process -> release; release -> transfer; "
       "transfer -> receive or arrive. Between machines only transfer -> "
       "transfer is legal."},
      {"boundary-violation",
       "A flow crosses a machine boundary between stages other than "
       "transfer and transfer. Things leave a machine through its transfer "
       "stage and enter the next machine through its transfer stage."},
      {"illegal-trigger-target",
       "A trigger must point at a create stage of another machine or at a "
       "transfer stage of another machine. Triggers never target process, "
       "release, receive, arrive, or accept, and never target a stage of "
       "the machine they originate from."},
      {"undeclared-thing",
       "A flow is labeled with a thing kind that has no thing declaration."},
      {"release-without-transfer",
       "A machine has a release stage but no transfer stage. Released "
       "things would have no way out of the machine."},
      {"accept-without-arrive",
       "A machine has an accept stage but no arrive stage. Accept examines "
       "things that have arrived, so it cannot appear alone."},
      {"arrive-without-accept",
       "A machine has an arrive stage but no accept stage. Arrived things "
       "would never be admitted; use the fused receive stage instead."},
      {"region-unresolved",
       "An event region names a stage or flow that does not exist in the "
       "model."},
      {"region-disconnected",
       "An event region is not connected: its stages and flows do not form "
       "a single connected subgraph of the machine."},
      {"chronology-unknown-event",
       "The chronology orders an event name that has no event declaration."},
      {"chronology-cycle",
       "The chronology edges form a cycle, so no execution order can "
       "satisfy them."},
      {"unreachable-stage",
       "No flow enters this stage and no trigger points at it, and it is "
       "not a create stage, so no thing can ever reach it."},
      {"cannot-fuse",
       "arrive and accept can only be fused into receive when the machine "
       "has both stages and nothing flows between them except the direct "
       "arrive -> accept flows."},
      {"config-error",
       "A simulation configuration line is malformed. Recognized keys: "
       "seed, max_ticks, spawn (PATH.create @ TICK x COUNT), "
       "duration.KIND, accept.PATH."},
      {"config-reference",
       "A simulation configuration entry names a stage or machine path "
       "that does not exist in the model."},
      {"chronology-violation",
       "A simulated trace starts one event before another although the "
       "declared chronology requires the opposite order."},
      {"event-never-occurred",
       "An event that the chronology mentions never occurred in the trace, "
       "so its ordering constraints were vacuous."},
      {"unknown-event",
       "A rendering or query operation was asked about an event name that "
       "the model does not declare."},
      {"path-not-found",
       "A fold or unfold operation named a machine path that does not "
       "exist in the model."},
      {"cannot-fold-root",
       "The root machine is the whole model and cannot be folded away."},
      {"path-not-folded",
       "Unfold was asked to restore a machine that is not currently "
       "folded."},
      {"fold-overlap",
       "A machine cannot be folded while it or one of its ancestors or "
       "descendants is already folded."},
      {"t-out-of-range",
       "A system-state query asked for a time outside the simulated range "
       "1..horizon."},
      {"budget-exceeded",
       "Interleaving enumeration exceeded its firing budget; the model has "
       "too many concurrent firings to enumerate exhaustively."},
      {"horizon-exhausted",
       "The simulation reached max_ticks with instances still live; the "
       "trace is truncated, not quiescent."},
      {"io-error",
       "A file could not be read or written."},
  };
  auto it = table.find(code);
  return it == table.end() ? std::string() : it->second;
}

}  // namespace tml
