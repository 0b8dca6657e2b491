#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "causalkg/collision.hpp"
#include "causalkg/inference.hpp"
#include "causalkg/intervention.hpp"
#include "causalkg/kg_build.hpp"
#include "causalkg/mediation.hpp"
#include "causalkg/model_json.hpp"
#include "causalkg/ontology.hpp"
#include "causalkg/query.hpp"
#include "causalkg/turtle.hpp"

namespace {

using namespace causalkg;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;

bool use_color() {
  if (std::getenv("CAUSALKG_NO_COLOR")) return false;
  return isatty(fileno(stderr));
}

void print_error(const std::string& message) {
  if (use_color()) {
    std::cerr << "\033[31merror:\033[0m " << message << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

int exit_code_for(const Error& e) {
  return (e.kind() == ErrorKind::io || e.kind() == ErrorKind::format)
             ? kExitIo
             : kExitDomain;
}

std::string fixed4(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

// ------------------------------------------------------------- rendering

std::string render_events(const std::vector<EventTerm>& events) {
  std::string out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += ", ";
    out += events[i].variable + "=" + events[i].state;
  }
  return out;
}

std::string render_query(const QueryAst& ast) {
  if (const auto* a = std::get_if<AssociationalQuery>(&ast)) {
    std::string out = "P(" + render_events(a->targets);
    if (!a->evidence.empty()) out += " | " + render_events(a->evidence);
    return out + ")";
  }
  if (const auto* i = std::get_if<InterventionalQuery>(&ast)) {
    std::string out = "P(" + render_events(i->targets) + " | do(" +
                      render_events(i->do_set) + ")";
    if (!i->evidence.empty()) out += ", " + render_events(i->evidence);
    return out + ")";
  }
  if (const auto* e = std::get_if<EffectQuery>(&ast)) {
    std::string kind = e->kind == EffectKind::tce   ? "TCE"
                       : e->kind == EffectKind::nde ? "NDE"
                                                    : "NIE";
    std::string out = kind + "(" + e->treatment + " -> " + e->outcome;
    if (e->mediator) out += " | via " + *e->mediator;
    if (e->t0 && e->t1) out += ", t0=" + *e->t0 + ", t1=" + *e->t1;
    return out + ")";
  }
  const auto& pn = std::get<NecessityQuery>(ast);
  return "PN(" + pn.cause.variable + "=" + pn.cause.state + " -> " +
         pn.outcome.variable + "=" + pn.outcome.state + ")";
}

ordered_json report_to_json(const EffectReport& report) {
  ordered_json j;
  j["treatment"] = report.spec.treatment;
  j["t0"] = report.spec.t0.value_or("");
  j["t1"] = report.spec.t1.value_or("");
  j["outcome"] = report.spec.outcome;
  j["mediator"] =
      report.spec.mediator ? ordered_json(*report.spec.mediator) : nullptr;
  j["tce"] = report.tce;
  j["nde"] = report.nde ? ordered_json(*report.nde) : nullptr;
  j["nie"] = report.nie ? ordered_json(*report.nie) : nullptr;
  j["nie_reversed"] =
      report.nie_reversed ? ordered_json(*report.nie_reversed) : nullptr;
  j["outcome_encoding"] = report.outcome_encoding;
  j["warnings"] = report.warnings;
  return j;
}

ordered_json distribution_to_json(const Distribution& dist) {
  ordered_json entries = ordered_json::array();
  std::vector<int> state(dist.variables.size(), 0);
  for (double p : dist.probabilities) {
    ordered_json row;
    ordered_json states = ordered_json::object();
    for (std::size_t i = 0; i < dist.variables.size(); ++i) {
      states[dist.variables[i]] = dist.state_labels[i][state[i]];
    }
    row["states"] = states;
    row["p"] = p;
    entries.push_back(row);
    for (int k = static_cast<int>(state.size()) - 1; k >= 0; --k) {
      if (++state[k] < static_cast<int>(dist.state_labels[k].size())) break;
      state[k] = 0;
    }
  }
  ordered_json j;
  j["variables"] = dist.variables;
  j["entries"] = entries;
  return j;
}

ordered_json result_to_json(const QueryResult& result, const QueryAst& ast) {
  ordered_json j;
  j["rung"] = result.rung == Rung::associational   ? "associational"
              : result.rung == Rung::interventional ? "interventional"
                                                    : "counterfactual";
  j["query"] = render_query(ast);
  if (const auto* pr = std::get_if<ProbabilityResult>(&result.value)) {
    j["kind"] = "probability";
    j["probability"] = pr->probability;
    j["distribution"] = distribution_to_json(pr->distribution);
  } else if (const auto* er = std::get_if<EffectResult>(&result.value)) {
    j["kind"] = "effect";
    j["effect"] = er->kind == EffectKind::tce   ? "tce"
                  : er->kind == EffectKind::nde ? "nde"
                                                : "nie";
    j["value"] = er->value;
    j["report"] = report_to_json(er->report);
  } else {
    const auto& interval = std::get<IntervalResult>(result.value);
    j["kind"] = "necessity";
    j["lo"] = interval.lo;
    j["hi"] = interval.hi;
  }
  return j;
}

void print_result_text(std::ostream& out, const QueryResult& result,
                       const QueryAst& ast) {
  if (const auto* pr = std::get_if<ProbabilityResult>(&result.value)) {
    out << render_query(ast) << " = " << fixed4(pr->probability) << "\n";
  } else if (const auto* er = std::get_if<EffectResult>(&result.value)) {
    out << render_query(ast) << " = " << fixed4(er->value) << "\n";
    for (const auto& w : er->report.warnings) {
      out << "warning: " << w << "\n";
    }
  } else {
    const auto& interval = std::get<IntervalResult>(result.value);
    out << render_query(ast) << " in [" << fixed4(interval.lo) << ", "
        << fixed4(interval.hi) << "]\n";
  }
}

// ------------------------------------------------------------- commands

int cmd_validate(const std::string& model_path) {
  CausalBayesianNetwork model = load_model(model_path);
  ValidationReport report = validate(model);
  if (report.ok()) {
    std::cout << "ok: " << model_path << " is a valid model ("
              << model.size() << " variables)\n";
    return kExitOk;
  }
  std::cerr << report.to_string();
  return kExitDomain;
}

int cmd_fit(const std::string& skeleton_path, const std::string& data_path,
            const std::string& out_path, double alpha) {
  CausalBayesianNetwork skeleton = load_model(skeleton_path);
  Dataset data = load_dataset(data_path);
  CausalBayesianNetwork fitted = fit_cpts(skeleton, data, alpha);
  save_model(fitted, out_path);
  std::cout << "fitted " << fitted.size() << " CPTs from "
            << data.rows.size() << " rows -> " << out_path << "\n";
  return kExitOk;
}

int cmd_effects(const std::string& model_path, const EffectSpec& spec,
                const std::string& format) {
  CausalBayesianNetwork model = load_model(model_path);
  EffectReport report = decompose(model, spec);
  if (format == "json") {
    std::cout << report_to_json(report).dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "treatment: " << report.spec.treatment << " ("
            << report.spec.t0.value_or("?") << " -> "
            << report.spec.t1.value_or("?") << ")\n";
  std::cout << "outcome: " << report.spec.outcome << "\n";
  if (report.spec.mediator) {
    std::cout << "mediator: " << *report.spec.mediator << "\n";
  }
  std::cout << "tce: " << fixed4(report.tce) << "\n";
  if (report.nde) std::cout << "nde: " << fixed4(*report.nde) << "\n";
  if (report.nie) std::cout << "nie: " << fixed4(*report.nie) << "\n";
  if (report.nie_reversed) {
    std::cout << "nie_reversed: " << fixed4(*report.nie_reversed) << "\n";
  }
  for (const auto& w : report.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return kExitOk;
}

int cmd_build(const std::string& model_path, const std::string& roles_path,
              const std::string& out_path) {
  CausalBayesianNetwork model = load_model(model_path);
  ValidationReport model_report = validate(model);
  if (!model_report.ok()) {
    std::cerr << model_report.to_string();
    return kExitDomain;
  }
  RoleMapping mapping = load_roles(roles_path);
  ValidationReport role_report = validate_roles(model, mapping);
  if (!role_report.ok()) {
    std::cerr << role_report.to_string();
    return kExitDomain;
  }
  std::vector<EffectReport> reports;
  for (const auto& pattern : declared_patterns(mapping)) {
    EffectSpec spec{pattern.treatment, pattern.outcome, pattern.mediator,
                    std::nullopt, std::nullopt};
    reports.push_back(decompose(model, spec));
  }
  CausalKnowledgeGraph kg = build_kg(model, mapping, reports);
  std::string text = serialize(kg);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
    std::cout << "wrote " << kg.statements.size() << " statements -> "
              << out_path << "\n";
  }
  return kExitOk;
}

int cmd_query(const std::string& model_path, const std::string& query_text,
              const std::string& kg_path, bool explain_flag,
              const std::string& format) {
  CausalBayesianNetwork model = load_model(model_path);
  std::optional<CausalKnowledgeGraph> kg;
  if (!kg_path.empty()) {
    kg = parse(read_file(kg_path));
  }
  if (explain_flag && !kg) {
    throw Error(ErrorKind::invalid_query,
                "--explain needs a knowledge graph (--kg FILE)");
  }
  QueryAst ast = parse_query(query_text);
  QueryResult result = evaluate(ast, model, kg ? &*kg : nullptr);
  if (format == "json") {
    ordered_json j = result_to_json(result, ast);
    if (explain_flag) j["explanation"] = explain(result, *kg, ast);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  print_result_text(std::cout, result, ast);
  if (explain_flag) {
    std::cout << "\n" << explain(result, *kg, ast);
  }
  return kExitOk;
}

int cmd_shell(const std::string& model_path, const std::string& kg_path,
              bool explain_flag) {
  CausalBayesianNetwork model = load_model(model_path);
  std::optional<CausalKnowledgeGraph> kg;
  if (!kg_path.empty()) {
    kg = parse(read_file(kg_path));
  }
  const bool interactive = isatty(fileno(stdin));
  std::string line;
  while (true) {
    if (interactive) {
      std::cout << "> " << std::flush;
    }
    if (!std::getline(std::cin, line)) break;
    if (line.empty()) continue;
    if (line == ":quit") return kExitOk;
    try {
      QueryAst ast = parse_query(line);
      QueryResult result = evaluate(ast, model, kg ? &*kg : nullptr);
      print_result_text(std::cout, result, ast);
      if (explain_flag && kg) {
        std::cout << explain(result, *kg, ast);
      }
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
  return kExitOk;
}

int cmd_example(const std::string& name, const std::string& out_dir) {
  if (name != "collision") {
    throw Error(ErrorKind::invalid_query,
                "unknown example '" + name + "'; available examples: collision");
  }
  std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::io, "cannot create directory " + dir.string());
  }
  save_model(collision_fixture(), (dir / "collision.json").string());
  write_file((dir / "roles.json").string(), roles_to_json(collision_roles()));
  write_file((dir / "README.md").string(), collision_readme());
  std::cout << "wrote collision.json, roles.json, README.md -> "
            << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal knowledge-graph engine"};
  app.fallthrough();
  std::string format = "text";
  std::uint64_t seed = 0;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--seed", seed,
                 "random seed (reserved for sampling-based workflows)");

  std::string model_path, data_path, out_path, roles_path, kg_path;
  std::string query_text, example_name = "collision";
  double alpha = 1.0;
  bool explain_flag = false;
  EffectSpec spec;
  std::string mediator, t0, t1;

  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  validate_cmd->add_option("model", model_path, "model JSON file")->required();

  auto* fit_cmd =
      app.add_subcommand("fit", "estimate CPTs from observations");
  fit_cmd->add_option("skeleton", model_path, "skeleton model JSON")
      ->required();
  fit_cmd->add_option("data", data_path, "observations CSV")->required();
  fit_cmd->add_option("-o,--output", out_path, "fitted model path")
      ->required();
  fit_cmd->add_option("--alpha", alpha, "additive smoothing")
      ->capture_default_str();

  auto* effects_cmd =
      app.add_subcommand("effects", "compute TCE/NDE/NIE for a triple");
  effects_cmd->add_option("model", model_path, "model JSON file")->required();
  effects_cmd->add_option("--treatment", spec.treatment)->required();
  effects_cmd->add_option("--outcome", spec.outcome)->required();
  effects_cmd->add_option("--mediator", mediator);
  effects_cmd->add_option("--t0", t0, "baseline treatment state");
  effects_cmd->add_option("--t1", t1, "active treatment state");

  auto* build_cmd =
      app.add_subcommand("build", "build and serialize the causal KG");
  build_cmd->add_option("model", model_path, "model JSON file")->required();
  build_cmd->add_option("--roles", roles_path, "role mapping JSON")
      ->required();
  build_cmd->add_option("-o,--output", out_path, "output .ttls path ('-' for stdout)");

  auto* query_cmd = app.add_subcommand("query", "answer one query");
  query_cmd->add_option("model", model_path, "model JSON file")->required();
  query_cmd->add_option("query", query_text, "query text")->required();
  query_cmd->add_option("--kg", kg_path, "knowledge graph (.ttls)");
  query_cmd->add_flag("--explain", explain_flag, "render an explanation");

  auto* shell_cmd =
      app.add_subcommand("shell", "interactive query loop (:quit to exit)");
  shell_cmd->add_option("model", model_path, "model JSON file")->required();
  shell_cmd->add_option("--kg", kg_path, "knowledge graph (.ttls)");
  shell_cmd->add_flag("--explain", explain_flag, "explain every result");

  auto* example_cmd =
      app.add_subcommand("example", "write a ready-to-run example");
  example_cmd->add_option("name", example_name, "example name")
      ->capture_default_str();
  example_cmd->add_option("-o,--output", out_path, "target directory");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(model_path);
    if (fit_cmd->parsed()) return cmd_fit(model_path, data_path, out_path, alpha);
    if (effects_cmd->parsed()) {
      if (!mediator.empty()) spec.mediator = mediator;
      if (!t0.empty()) spec.t0 = t0;
      if (!t1.empty()) spec.t1 = t1;
      return cmd_effects(model_path, spec, format);
    }
    if (build_cmd->parsed()) return cmd_build(model_path, roles_path, out_path);
    if (query_cmd->parsed()) {
      return cmd_query(model_path, query_text, kg_path, explain_flag, format);
    }
    if (shell_cmd->parsed()) return cmd_shell(model_path, kg_path, explain_flag);
    if (example_cmd->parsed()) return cmd_example(example_name, out_path);
  } catch (const Error& e) {
    print_error(e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_error(e.what());
    return kExitIo;
  }
  return kExitOk;
}
