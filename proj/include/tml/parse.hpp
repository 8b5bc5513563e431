#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/model.hpp"

namespace tml {

struct ParseResult {
  std::optional<Model> model;  // present iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

namespace detail {

inline bool is_reserved(std::string_view s) {
  static constexpr std::string_view words[] = {
      "model",  "machine", "thing",   "flow",    "trigger", "event",
      "chronology", "region", "duration", "create", "receive", "arrive",
      "accept", "process", "release", "transfer"};
  for (std::string_view w : words)
    if (w == s) return true;
  return false;
}

struct Token {
  enum class Type { Ident, Int, LBrace, RBrace, Comma, Colon, Semi, Dot,
                    Arrow, End };
  Type type = Type::End;
  std::string text;
  int column = 1;
};

inline bool lex_line(std::string_view line, int line_no,
                     std::vector<Token>& out,
                     std::vector<Diagnostic>& diags) {
  size_t i = 0;
  auto is_ident_start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto is_ident = [&](char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  };
  while (i < line.size()) {
    char c = line[i];
    int col = static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t') { ++i; continue; }
    if (c == '#') break;
    if (is_ident_start(c)) {
      size_t j = i;
      while (j < line.size() && is_ident(line[j])) ++j;
      out.push_back({Token::Type::Ident,
                     std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (c >= '0' && c <= '9') {
      size_t j = i;
      while (j < line.size() && line[j] >= '0' && line[j] <= '9') ++j;
      out.push_back({Token::Type::Int, std::string(line.substr(i, j - i)),
                     col});
      i = j;
      continue;
    }
    Token::Type t;
    switch (c) {
      case '{': t = Token::Type::LBrace; break;
      case '}': t = Token::Type::RBrace; break;
      case ',': t = Token::Type::Comma; break;
      case ':': t = Token::Type::Colon; break;
      case ';': t = Token::Type::Semi; break;
      case '.': t = Token::Type::Dot; break;
      case '-':
        if (i + 1 < line.size() && line[i + 1] == '>') {
          out.push_back({Token::Type::Arrow, "->", col});
          i += 2;
          continue;
        }
        [[fallthrough]];
      default:
        diags.push_back({Severity::Error, "lexical-error",
                         std::string("unexpected character '") + c + "'",
                         {line_no, col, 1}});
        return false;
    }
    out.push_back({t, std::string(1, c), col});
    ++i;
  }
  out.push_back({Token::Type::End, "",
                 static_cast<int>(line.size()) + 1});
  return true;
}

struct Cursor {
  const std::vector<Token>* tokens = nullptr;
  size_t i = 0;
  int line = 1;
  std::vector<Diagnostic>* diags = nullptr;
  bool failed = false;

  const Token& peek() const { return (*tokens)[i]; }
  const Token& next() { return (*tokens)[i < tokens->size() - 1 ? i++ : i]; }
  bool at_end() const { return peek().type == Token::Type::End; }

  void error(const std::string& message) {
    if (failed) return;
    failed = true;
    const Token& t = peek();
    int len = t.text.empty() ? 1 : static_cast<int>(t.text.size());
    diags->push_back({Severity::Error, "syntax-error", message,
                      {line, t.column, len}});
  }

  bool expect(Token::Type type, const std::string& what) {
    if (peek().type == type) {
      next();
      return true;
    }
    error("expected " + what);
    return false;
  }

  // A plain (non-reserved) identifier.
  std::optional<std::string> name(const std::string& what) {
    if (peek().type != Token::Type::Ident) {
      error("expected " + what);
      return std::nullopt;
    }
    if (is_reserved(peek().text)) {
      error("reserved word '" + peek().text + "' cannot be used as " + what);
      return std::nullopt;
    }
    return next().text;
  }

  // IDENT ('.' IDENT)* — raw segments, keywords allowed (checked by caller).
  std::vector<Token> chain() {
    std::vector<Token> segs;
    if (peek().type != Token::Type::Ident) {
      error("expected identifier");
      return {};
    }
    segs.push_back(next());
    while (peek().type == Token::Type::Dot) {
      next();
      if (peek().type != Token::Type::Ident) {
        error("expected identifier after '.'");
        return {};
      }
      segs.push_back(next());
    }
    return segs;
  }

  // PATH '.' KIND — a stage reference.
  std::optional<StageRef> stage_ref() {
    std::vector<Token> segs = chain();
    if (failed) return std::nullopt;
    auto kind = stage_kind_from(segs.back().text);
    if (!kind) {
      error("stage reference must end in a stage kind");
      return std::nullopt;
    }
    if (segs.size() < 2) {
      error("stage reference needs a machine path");
      return std::nullopt;
    }
    std::string path;
    for (size_t k = 0; k + 1 < segs.size(); ++k) {
      if (is_reserved(segs[k].text)) {
        error("reserved word '" + segs[k].text +
              "' cannot be used as a machine name");
        return std::nullopt;
      }
      if (k) path += '.';
      path += segs[k].text;
    }
    return StageRef{path, *kind};
  }
};

struct MachineDecl {
  std::string path;
  std::vector<StageKind> stages;
  SourceSpan span;
};

}  // namespace detail

inline ParseResult parse(std::string_view text) {
  using detail::Token;
  ParseResult result;
  std::vector<Diagnostic>& diags = result.diagnostics;

  std::string model_name;
  SourceSpan model_span;
  std::vector<detail::MachineDecl> machine_decls;
  Model model;

  int line_no = 0;
  size_t pos = 0;
  bool saw_model = false;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;

    std::vector<Token> tokens;
    if (!detail::lex_line(line, line_no, tokens, diags)) {
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
      continue;
    }
    detail::Cursor c{&tokens, 0, line_no, &diags, false};

    if (!c.at_end()) {
      const Token& head = c.peek();
      if (head.type != Token::Type::Ident) {
        c.error("expected a declaration");
      } else if (!saw_model && head.text != "model") {
        c.error("expected model declaration first");
      } else if (head.text == "model") {
        c.next();
        if (saw_model) {
          diags.push_back({Severity::Error, "duplicate-declaration",
                           "model is already declared",
                           {line_no, head.column, 5}});
          c.name("a model name");  // consume it; one report per line
        } else if (auto n = c.name("a model name")) {
          saw_model = true;
          model_name = *n;
          model_span = {line_no, head.column, 5};
        }
      } else if (head.text == "thing") {
        c.next();
        if (auto n = c.name("a thing name")) {
          if (model.has_thing(*n))
            diags.push_back({Severity::Error, "duplicate-declaration",
                             "thing " + *n + " is already declared",
                             {line_no, head.column, 5}});
          else
            model.things.push_back(
                {*n, SourceSpan{line_no, head.column, 5}});
        }
      } else if (head.text == "machine") {
        c.next();
        detail::MachineDecl decl;
        decl.span = {line_no, head.column, 7};
        std::vector<Token> segs = c.chain();
        for (const Token& s : segs) {
          if (detail::is_reserved(s.text)) {
            c.error("reserved word '" + s.text +
                    "' cannot be used as a machine name");
            break;
          }
          if (!decl.path.empty()) decl.path += '.';
          decl.path += s.text;
        }
        if (!c.failed && c.expect(Token::Type::LBrace, "'{'")) {
          while (!c.failed && c.peek().type != Token::Type::RBrace) {
            if (!decl.stages.empty() &&
                !c.expect(Token::Type::Comma, "',' or '}'"))
              break;
            if (c.peek().type != Token::Type::Ident) {
              c.error("expected a stage kind");
              break;
            }
            auto kind = stage_kind_from(c.peek().text);
            if (!kind) {
              c.error("'" + c.peek().text + "' is not a stage kind");
              break;
            }
            c.next();
            if (std::find(decl.stages.begin(), decl.stages.end(), *kind) !=
                decl.stages.end()) {
              c.failed = true;
              diags.push_back({Severity::Error, "duplicate-declaration",
                               "stage " + std::string(to_string(*kind)) +
                                   " is declared twice in machine " +
                                   decl.path,
                               {line_no, head.column, 7}});
              break;
            }
            decl.stages.push_back(*kind);
          }
          if (!c.failed) c.expect(Token::Type::RBrace, "'}'");
        }
        if (!c.failed) {
          bool fused = std::find(decl.stages.begin(), decl.stages.end(),
                                 StageKind::Receive) != decl.stages.end();
          bool split =
              std::find(decl.stages.begin(), decl.stages.end(),
                        StageKind::Arrive) != decl.stages.end() ||
              std::find(decl.stages.begin(), decl.stages.end(),
                        StageKind::Accept) != decl.stages.end();
          if (fused && split) {
            c.failed = true;
            diags.push_back({Severity::Error, "mixed-receive-form",
                             "machine " + decl.path +
                                 " mixes receive with arrive/accept",
                             {line_no, head.column, 7}});
          }
        }
        if (!c.failed) {
          std::sort(decl.stages.begin(), decl.stages.end(),
                    [](StageKind a, StageKind b) {
                      return kind_index(a) < kind_index(b);
                    });
          machine_decls.push_back(std::move(decl));
        }
      } else if (head.text == "flow") {
        c.next();
        Flow f;
        f.span = SourceSpan{line_no, head.column, 4};
        if (auto thing = c.name("a thing name")) {
          f.thing = *thing;
          if (c.expect(Token::Type::Colon, "':'")) {
            if (auto src = c.stage_ref()) {
              f.source = *src;
              if (c.expect(Token::Type::Arrow, "'->'")) {
                if (auto tgt = c.stage_ref()) {
                  f.target = *tgt;
                  if (std::find(model.flows.begin(), model.flows.end(), f) !=
                      model.flows.end()) {
                    c.failed = true;
                    diags.push_back({Severity::Error, "duplicate-declaration",
                                     "flow is already declared",
                                     *f.span});
                  } else {
                    model.flows.push_back(std::move(f));
                  }
                }
              }
            }
          }
        }
      } else if (head.text == "trigger") {
        c.next();
        Trigger t;
        t.span = SourceSpan{line_no, head.column, 7};
        if (auto src = c.stage_ref()) {
          t.source = *src;
          if (c.expect(Token::Type::Arrow, "'->'")) {
            if (auto tgt = c.stage_ref()) {
              t.target = *tgt;
              if (std::find(model.triggers.begin(), model.triggers.end(),
                            t) != model.triggers.end()) {
                c.failed = true;
                diags.push_back({Severity::Error, "duplicate-declaration",
                                 "trigger is already declared", *t.span});
              } else {
                model.triggers.push_back(std::move(t));
              }
            }
          }
        }
      } else if (head.text == "event") {
        c.next();
        Event e;
        e.span = SourceSpan{line_no, head.column, 5};
        if (auto n = c.name("an event name")) {
          e.name = *n;
          if (c.expect(Token::Type::LBrace, "'{'")) {
            if (c.peek().type == Token::Type::Ident &&
                c.peek().text == "region") {
              c.next();
              if (c.expect(Token::Type::Colon, "':'")) {
                while (!c.failed) {
                  RegionRef r;
                  std::vector<Token> segs = c.chain();
                  if (c.failed) break;
                  if (segs.size() == 1 &&
                      c.peek().type == Token::Type::Colon) {
                    if (detail::is_reserved(segs[0].text)) {
                      c.error("reserved word '" + segs[0].text +
                              "' cannot be used as a thing name");
                      break;
                    }
                    r.is_flow = true;
                    r.thing = segs[0].text;
                    c.next();
                    if (auto src = c.stage_ref()) r.source = *src;
                    if (c.failed) break;
                    if (!c.expect(Token::Type::Arrow, "'->'")) break;
                    if (auto tgt = c.stage_ref()) r.target = *tgt;
                    if (c.failed) break;
                  } else {
                    // Re-interpret the chain as a stage reference.
                    auto kind = stage_kind_from(segs.back().text);
                    if (!kind || segs.size() < 2) {
                      c.error("expected a stage or flow reference");
                      break;
                    }
                    std::string path;
                    for (size_t k = 0; k + 1 < segs.size(); ++k) {
                      if (detail::is_reserved(segs[k].text)) {
                        c.error("reserved word '" + segs[k].text +
                                "' cannot be used as a machine name");
                        break;
                      }
                      if (k) path += '.';
                      path += segs[k].text;
                    }
                    if (c.failed) break;
                    r.stage = StageRef{path, *kind};
                  }
                  e.region.push_back(std::move(r));
                  if (c.peek().type == Token::Type::Comma) {
                    c.next();
                    continue;
                  }
                  break;
                }
              }
              if (!c.failed && c.peek().type == Token::Type::Semi) {
                c.next();
                if (c.peek().type == Token::Type::Ident &&
                    c.peek().text == "duration") {
                  c.next();
                  if (c.expect(Token::Type::Colon, "':'")) {
                    if (c.peek().type != Token::Type::Int) {
                      c.error("expected a duration in ticks");
                    } else {
                      e.duration = std::stoi(c.next().text);
                      if (e.duration < 1)
                        c.error("duration must be at least 1");
                    }
                  }
                } else {
                  c.error("expected duration");
                }
              }
              if (!c.failed) c.expect(Token::Type::RBrace, "'}'");
            } else {
              c.error("expected region");
            }
          }
          if (!c.failed && e.region.empty())
            c.error("event region is empty");
          if (!c.failed) {
            bool dup = false;
            for (const Event& other : model.events)
              if (other.name == e.name) dup = true;
            if (dup)
              diags.push_back({Severity::Error, "duplicate-declaration",
                               "event " + e.name + " is already declared",
                               *e.span});
            else
              model.events.push_back(std::move(e));
          }
        }
      } else if (head.text == "chronology") {
        c.next();
        if (c.expect(Token::Type::LBrace, "'{'")) {
          while (!c.failed) {
            auto before = c.name("an event name");
            if (!before) break;
            if (!c.expect(Token::Type::Arrow, "'->'")) break;
            auto after = c.name("an event name");
            if (!after) break;
            ChronologyEdge edge{*before, *after,
                                SourceSpan{line_no, head.column, 10}};
            bool dup = false;
            for (const ChronologyEdge& e : model.chronology.edges)
              if (e.before == edge.before && e.after == edge.after)
                dup = true;
            if (!dup) model.chronology.edges.push_back(std::move(edge));
            if (c.peek().type == Token::Type::Semi) {
              c.next();
              continue;
            }
            break;
          }
          if (!c.failed) c.expect(Token::Type::RBrace, "'}'");
        }
      } else {
        c.error("unknown declaration '" + head.text + "'");
      }

      if (!c.failed && !c.at_end()) c.error("unexpected trailing tokens");
    }

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  if (!saw_model) {
    diags.push_back({Severity::Error, "syntax-error",
                     "expected model declaration", {1, 1, 1}});
  }

  // Build the machine tree. Parents that were never declared are
  // synthesized as empty containers with a warning.
  model.name = model_name;
  model.root.name = model_name;
  model.root.path = "";
  std::map<std::string, bool> explicit_paths;  // path -> declared explicitly
  for (detail::MachineDecl& decl : machine_decls) {
    std::vector<std::string> segs;
    size_t start = 0;
    while (true) {
      size_t dot = decl.path.find('.', start);
      segs.push_back(decl.path.substr(
          start, dot == std::string::npos ? std::string::npos : dot - start));
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    Machine* cur = &model.root;
    std::string acc;
    for (size_t k = 0; k < segs.size(); ++k) {
      if (!acc.empty()) acc += '.';
      acc += segs[k];
      Machine* child = nullptr;
      for (Machine& m : cur->submachines)
        if (m.name == segs[k]) child = &m;
      bool last = (k + 1 == segs.size());
      if (!child) {
        cur->submachines.push_back(Machine{segs[k], acc, {}, {}, decl.span});
        child = &cur->submachines.back();
        if (last) {
          child->stages = decl.stages;
          explicit_paths[acc] = true;
        } else {
          explicit_paths[acc] = false;
          diags.push_back({Severity::Warning, "auto-created-parent",
                           "machine " + acc +
                               " was never declared; created an empty "
                               "container for it",
                           decl.span});
        }
      } else if (last) {
        if (explicit_paths[acc]) {
          diags.push_back({Severity::Error, "duplicate-declaration",
                           "machine " + acc + " is already declared",
                           decl.span});
        } else {
          child->stages = decl.stages;
          child->span = decl.span;
          explicit_paths[acc] = true;
        }
      }
      cur = child;
    }
  }

  // Flow and trigger endpoints must name stages that exist.
  for (const Flow& f : model.flows) {
    for (const StageRef* r : {&f.source, &f.target})
      if (!resolve_stage(model, *r))
        diags.push_back({Severity::Error, "dangling-reference",
                         "no stage " + r->str() + " in the model",
                         f.span.value_or(SourceSpan{})});
  }
  for (const Trigger& t : model.triggers) {
    for (const StageRef* r : {&t.source, &t.target})
      if (!resolve_stage(model, *r))
        diags.push_back({Severity::Error, "dangling-reference",
                         "no stage " + r->str() + " in the model",
                         t.span.value_or(SourceSpan{})});
  }

  sort_diagnostics(diags);
  if (!has_errors(diags)) result.model = std::move(model);
  return result;
}

}  // namespace tml
