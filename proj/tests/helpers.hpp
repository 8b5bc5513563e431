#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "tml/tm.hpp"

namespace th {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  INFO("reading " << path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string dump(const std::vector<tml::Diagnostic>& ds) {
  std::string out;
  for (const tml::Diagnostic& d : ds)
    out += std::to_string(d.span.line) + ": " + d.code + ": " + d.message +
           "\n";
  return out;
}

inline tml::Model parse_ok(const std::string& text) {
  tml::ParseResult r = tml::parse(text);
  INFO(dump(r.diagnostics));
  REQUIRE(r.ok());
  return *r.model;
}

inline tml::Model load(const std::string& path) {
  return parse_ok(slurp(path));
}

inline std::vector<std::string> codes(const std::vector<tml::Diagnostic>& ds,
                                      tml::Severity sev) {
  std::vector<std::string> out;
  for (const tml::Diagnostic& d : ds)
    if (d.severity == sev) out.push_back(d.code);
  return out;
}

inline std::vector<std::string> error_codes(
    const std::vector<tml::Diagnostic>& ds) {
  return codes(ds, tml::Severity::Error);
}

inline std::vector<std::string> warning_codes(
    const std::vector<tml::Diagnostic>& ds) {
  return codes(ds, tml::Severity::Warning);
}

inline tml::SimConfig config_ok(const std::string& text,
                                const tml::Model& model) {
  tml::ConfigResult r = tml::parse_config(text, model);
  INFO(dump(r.diagnostics));
  REQUIRE(r.ok());
  return *r.config;
}

}  // namespace th
