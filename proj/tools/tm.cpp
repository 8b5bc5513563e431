// Command-line front end: validate, render, simulate, fold, events.
// Exit codes: 0 ok, 1 model/chronology errors, 2 I/O errors,
// 3 simulation horizon exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tml/tm.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitModelError = 1;
constexpr int kExitIoError = 2;
constexpr int kExitExhausted = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return bool(out);
}

ordered_json diag_json(const tml::Diagnostic& d) {
  return ordered_json{{"severity", std::string(tml::to_string(d.severity))},
                      {"code", d.code},
                      {"message", d.message},
                      {"line", d.span.line},
                      {"column", d.span.column}};
}

void print_diags(const std::vector<tml::Diagnostic>& diags, bool human,
                 std::ostream& out) {
  for (const tml::Diagnostic& d : diags) {
    if (human)
      out << d.span.line << ":" << d.span.column << ": "
          << tml::to_string(d.severity) << ": " << d.message << " ["
          << d.code << "]\n";
    else
      out << diag_json(d).dump() << "\n";
  }
}

// One-off errors (I/O, fold failures, ...) go out in the same shape as
// parser/validator diagnostics so scripts can treat stderr uniformly.
// Line and column 0 mean "no source location".
void emit_error(const std::string& code, const std::string& message,
                bool human) {
  print_diags({{tml::Severity::Error, code, message, {0, 0, 0}}}, human,
              std::cerr);
}

// Parse and validate; on any error print diagnostics and return nothing.
std::optional<tml::Model> load_model(const std::string& path, bool human,
                                     int& exit_code) {
  auto text = read_file(path);
  if (!text) {
    emit_error("io-error", "cannot read " + path, human);
    exit_code = kExitIoError;
    return std::nullopt;
  }
  tml::ParseResult parsed = tml::parse(*text);
  std::vector<tml::Diagnostic> diags = parsed.diagnostics;
  if (parsed.ok()) {
    std::vector<tml::Diagnostic> v = tml::validate(*parsed.model);
    diags.insert(diags.end(), v.begin(), v.end());
    tml::sort_diagnostics(diags);
  }
  print_diags(diags, human, std::cerr);
  if (!parsed.ok() || tml::has_errors(diags)) {
    exit_code = kExitModelError;
    return std::nullopt;
  }
  return std::move(*parsed.model);
}

int cmd_validate(const std::string& file, bool human) {
  auto text = read_file(file);
  if (!text) {
    emit_error("io-error", "cannot read " + file, human);
    return kExitIoError;
  }
  tml::ParseResult parsed = tml::parse(*text);
  std::vector<tml::Diagnostic> diags = parsed.diagnostics;
  if (parsed.ok()) {
    std::vector<tml::Diagnostic> v = tml::validate(*parsed.model);
    diags.insert(diags.end(), v.begin(), v.end());
    tml::sort_diagnostics(diags);
  }
  print_diags(diags, human, std::cerr);
  return tml::has_errors(diags) ? kExitModelError : kExitOk;
}

int cmd_render(const std::string& file,
               const std::vector<std::string>& fold_paths,
               const std::string& highlight, const std::string& out_path,
               bool human) {
  int exit_code = kExitOk;
  auto model = load_model(file, human, exit_code);
  if (!model) return exit_code;
  tml::FoldView view = tml::make_fold_view(*model);
  tml::RenderOptions opts;
  try {
    for (const std::string& p : fold_paths) tml::fold(view, p);
    opts.folded = view.folded;
    opts.highlight = highlight;
    std::string dot = tml::to_dot(view.original, opts);
    if (out_path.empty()) {
      std::cout << dot;
    } else if (!write_file(out_path, dot)) {
      emit_error("io-error", "cannot write " + out_path, human);
      return kExitIoError;
    }
  } catch (const tml::Error& e) {
    emit_error(e.code(), e.what(), human);
    return kExitModelError;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& file, const std::string& config_path,
                 const std::string& trace_path,
                 const std::string& timeline_path, bool human) {
  int exit_code = kExitOk;
  auto model = load_model(file, human, exit_code);
  if (!model) return exit_code;
  auto cfg_text = read_file(config_path);
  if (!cfg_text) {
    emit_error("io-error", "cannot read " + config_path, human);
    return kExitIoError;
  }
  tml::ConfigResult cfg = tml::parse_config(*cfg_text, *model);
  print_diags(cfg.diagnostics, human, std::cerr);
  if (!cfg.ok()) return kExitModelError;

  tml::Trace trace = tml::simulate(*model, *cfg.config);

  std::string rows = tml::trace_jsonl(trace);
  if (trace_path.empty()) {
    std::cout << rows;
  } else if (!write_file(trace_path, rows)) {
    emit_error("io-error", "cannot write " + trace_path, human);
    return kExitIoError;
  }
  if (!timeline_path.empty() &&
      !write_file(timeline_path, tml::timeline_tsv(*model, trace))) {
    emit_error("io-error", "cannot write " + timeline_path, human);
    return kExitIoError;
  }

  std::vector<tml::Diagnostic> chron = tml::check_chronology(*model, trace);
  print_diags(chron, human, std::cerr);
  if (tml::has_errors(chron)) return kExitModelError;
  if (trace.exhausted) {
    emit_error("horizon-exhausted",
               "simulation still live after " +
                   std::to_string(trace.horizon) + " ticks",
               human);
    return kExitExhausted;
  }
  return kExitOk;
}

int cmd_fold(const std::string& file,
             const std::vector<std::string>& fold_paths, bool human) {
  int exit_code = kExitOk;
  auto model = load_model(file, human, exit_code);
  if (!model) return exit_code;
  tml::FoldView view = tml::make_fold_view(*model);
  try {
    for (const std::string& p : fold_paths) tml::fold(view, p);
  } catch (const tml::Error& e) {
    emit_error(e.code(), e.what(), human);
    return kExitModelError;
  }
  for (const std::string& p : view.folded) {
    std::cout << "folded " << p << "\n";
    int hidden = 0;
    tml::for_each_machine(*view.original.find_machine(p),
                          [&](const tml::Machine& m) {
                            hidden += static_cast<int>(m.stages.size());
                          });
    std::cout << "hidden stages: " << hidden << "\n";
    for (const tml::BoundaryArc& arc : tml::boundary_arcs(view.original, p))
      std::cout << "boundary " << arc.str(p) << "\n";
  }
  return kExitOk;
}

int cmd_events(const std::string& file, bool elementary, bool human) {
  int exit_code = kExitOk;
  auto model = load_model(file, human, exit_code);
  if (!model) return exit_code;
  if (elementary) {
    for (const tml::Event& e : tml::elementary_events(*model))
      std::cout << ordered_json{{"name", e.name},
                                {"region", {e.region[0].stage.str()}},
                                {"duration", e.duration}}
                       .dump()
                << "\n";
    return kExitOk;
  }
  std::vector<const tml::Event*> events;
  for (const tml::Event& e : model->events) events.push_back(&e);
  std::sort(events.begin(), events.end(),
            [](const tml::Event* a, const tml::Event* b) {
              return a->name < b->name;
            });
  for (const tml::Event* e : events) {
    std::vector<std::string> region;
    std::vector<std::string> flows;
    std::vector<tml::StageRef> stages;
    for (const tml::RegionRef& r : e->region) {
      if (r.is_flow)
        flows.push_back(r.str());
      else
        stages.push_back(r.stage);
    }
    std::sort(stages.begin(), stages.end());
    std::sort(flows.begin(), flows.end());
    for (const tml::StageRef& s : stages) region.push_back(s.str());
    for (const std::string& f : flows) region.push_back(f);
    std::cout << ordered_json{{"name", e->name},
                              {"region", region},
                              {"duration", e->duration}}
                     .dump()
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staged-flow machine models: validate, draw, simulate, fold"};
  app.require_subcommand(1);

  std::string file, config_path, trace_path, timeline_path, highlight,
      out_path;
  std::vector<std::string> fold_paths;
  bool human = false;
  bool elementary = false;

  CLI::App* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("file", file)->required();

  CLI::App* render = app.add_subcommand("render", "emit a Graphviz diagram");
  render->add_option("file", file)->required();
  render->add_option("--fold", fold_paths, "fold a machine into one box");
  render->add_option("--highlight", highlight, "color an event's region");
  render->add_option("--out", out_path, "write to a file instead of stdout");

  CLI::App* simulate = app.add_subcommand("simulate", "run a model");
  simulate->add_option("file", file)->required();
  simulate->add_option("--config", config_path)->required();
  simulate->add_option("--trace", trace_path, "trace output file");
  simulate->add_option("--timeline", timeline_path, "timeline output file");

  CLI::App* fold = app.add_subcommand("fold", "report a fold's boundary");
  fold->add_option("file", file)->required();
  fold->add_option("--path", fold_paths, "machine to fold")->required();

  CLI::App* events = app.add_subcommand("events", "list declared events");
  events->add_option("file", file)->required();
  events->add_flag("--elementary", elementary,
                   "list every stage as its own event");

  for (CLI::App* sub : {validate, render, simulate, fold, events})
    sub->add_flag("--human", human, "prose diagnostics instead of JSON");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(file, human);
  if (render->parsed())
    return cmd_render(file, fold_paths, highlight, out_path, human);
  if (simulate->parsed())
    return cmd_simulate(file, config_path, trace_path, timeline_path, human);
  if (fold->parsed()) return cmd_fold(file, fold_paths, human);
  if (events->parsed()) return cmd_events(file, elementary, human);
  return kExitOk;
}
