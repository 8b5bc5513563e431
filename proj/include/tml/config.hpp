#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tml/diagnostics.hpp"
#include "tml/model.hpp"

namespace tml {

enum class AcceptPolicy { Always, Never };

struct Spawn {
  StageRef stage;  // always a create stage
  int tick = 1;
  int count = 1;
};

struct SimConfig {
  long seed = 0;
  int max_ticks = 100;
  std::vector<Spawn> spawns;
  std::map<StageKind, int> durations;      // ticks a stage occupies
  std::map<std::string, AcceptPolicy> accept;  // keyed by machine path

  int duration(StageKind k) const {
    auto it = durations.find(k);
    return it == durations.end() ? 1 : it->second;
  }

  AcceptPolicy accept_policy(const std::string& path) const {
    auto it = accept.find(path);
    return it == accept.end() ? AcceptPolicy::Always : it->second;
  }
};

struct ConfigResult {
  std::optional<SimConfig> config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return config.has_value(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::optional<long> to_long(std::string_view s) {
  if (s.empty()) return std::nullopt;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return s[0] == '-' ? -v : v;
}

inline std::optional<StageRef> parse_stage_ref_text(std::string_view s) {
  auto dot = s.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == s.size())
    return std::nullopt;
  auto kind = stage_kind_from(s.substr(dot + 1));
  if (!kind) return std::nullopt;
  return StageRef{std::string(s.substr(0, dot)), *kind};
}

}  // namespace detail

// Simulation configuration: `key = value` lines, '#' comments.
// Keys: seed, max_ticks, spawn (= PATH.create @ TICK x COUNT, repeatable),
// duration.KIND (= ticks), accept.PATH (= always | never).
inline ConfigResult parse_config(std::string_view text, const Model& model) {
  ConfigResult result;
  std::vector<Diagnostic>& diags = result.diagnostics;
  SimConfig cfg;

  auto err = [&](const std::string& code, const std::string& message,
                 int line) {
    diags.push_back({Severity::Error, code, message, {line, 1, 1}});
  };

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    if (eol == std::string_view::npos)
      pos = text.size() + 1;
    else
      pos = eol + 1;

    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      err("config-error", "expected key = value", line_no);
      continue;
    }
    std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));

    if (key == "seed") {
      auto v = detail::to_long(value);
      if (!v)
        err("config-error", "seed must be an integer", line_no);
      else
        cfg.seed = *v;
    } else if (key == "max_ticks") {
      auto v = detail::to_long(value);
      if (!v || *v < 1)
        err("config-error", "max_ticks must be a positive integer", line_no);
      else
        cfg.max_ticks = static_cast<int>(*v);
    } else if (key == "spawn") {
      auto at = value.find('@');
      if (at == std::string::npos) {
        err("config-error", "spawn needs PATH.create @ TICK x COUNT",
            line_no);
        continue;
      }
      auto ref = detail::parse_stage_ref_text(
          detail::trim(std::string_view(value).substr(0, at)));
      std::string_view rest = detail::trim(
          std::string_view(value).substr(at + 1));
      auto x = rest.find('x');
      std::optional<long> tick, count;
      if (x == std::string_view::npos) {
        tick = detail::to_long(detail::trim(rest));
        count = 1;
      } else {
        tick = detail::to_long(detail::trim(rest.substr(0, x)));
        count = detail::to_long(detail::trim(rest.substr(x + 1)));
      }
      if (!ref || ref->kind != StageKind::Create || !tick || *tick < 1 ||
          !count || *count < 1) {
        err("config-error", "spawn needs PATH.create @ TICK x COUNT",
            line_no);
        continue;
      }
      if (!resolve_stage(model, *ref)) {
        err("config-reference", "no stage " + ref->str() + " in the model",
            line_no);
        continue;
      }
      cfg.spawns.push_back(
          {*ref, static_cast<int>(*tick), static_cast<int>(*count)});
    } else if (key.rfind("duration.", 0) == 0) {
      auto kind = stage_kind_from(std::string_view(key).substr(9));
      auto v = detail::to_long(value);
      if (!kind)
        err("config-error", "unknown stage kind in " + key, line_no);
      else if (!v || *v < 1)
        err("config-error", "duration must be a positive integer", line_no);
      else
        cfg.durations[*kind] = static_cast<int>(*v);
    } else if (key.rfind("accept.", 0) == 0) {
      std::string path = key.substr(7);
      const Machine* m = model.find_machine(path);
      if (!m) {
        err("config-reference", "no machine " + path + " in the model",
            line_no);
      } else if (!m->has_stage(StageKind::Accept) &&
                 !m->has_stage(StageKind::Receive)) {
        err("config-reference",
            "machine " + path + " has no accept or receive stage", line_no);
      } else if (value == "always") {
        cfg.accept[path] = AcceptPolicy::Always;
      } else if (value == "never") {
        cfg.accept[path] = AcceptPolicy::Never;
      } else {
        err("config-error", "accept policy must be always or never",
            line_no);
      }
    } else {
      err("config-error", "unknown configuration key " + key, line_no);
    }
  }

  sort_diagnostics(diags);
  if (!has_errors(diags)) result.config = std::move(cfg);
  return result;
}

}  // namespace tml
