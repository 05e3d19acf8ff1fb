// ucat: command-line front end for the use-case -> ontology -> pattern pipeline.
//
// Exit status: 0 success, 1 diagnostics of severity error, 2 I/O failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "ucat/http_server.hpp"
#include "ucat/manchester_parser.hpp"
#include "ucat/ontology.hpp"
#include "ucat/pattern_catalog.hpp"
#include "ucat/pipeline.hpp"
#include "ucat/query.hpp"
#include "ucat/query_eval.hpp"
#include "ucat/rus_grammar.hpp"
#include "ucat/service.hpp"
#include "ucat/type_assignment.hpp"
#include "ucat/usecase_parser.hpp"

namespace {

struct PipelineConfig {
  std::string rus_path;
  std::string usecase_path;
  std::string types_path;
  std::string base_iri;
  std::string output_path;
  std::string catalog_dir;
  std::string ontology_path;
  std::string query_path;
  std::string static_dir;
  bool permissive = false;
  int port = 8080;
};

/// Reported with exit status 1 after its message was printed.
struct Diagnosed {};

void require(const std::string& value, const char* flag) {
  if (value.empty())
    throw ucat::Error(ucat::ErrorCode::StageError, std::string(flag) + " is required");
}

void print_line_errors(const ucat::ParsedUseCase& parsed, std::ostream& out) {
  for (const auto& e : parsed.errors) {
    out << "line " << e.line_number << ": NoRuleMatches: " << e.text << "\n";
    for (const auto& f : e.failures)
      out << "  rule " << f.rule_index + 1 << ": " << f.reason << "\n";
  }
}

ucat::Extraction load_extraction(const PipelineConfig& cfg) {
  require(cfg.rus_path, "--rus");
  require(cfg.usecase_path, "--usecase");
  auto rus_text = ucat::read_file(cfg.rus_path);
  auto uc_text = ucat::read_file(cfg.usecase_path);
  ucat::RusFile rus;
  try {
    rus = ucat::parse_rus(rus_text);
  } catch (const ucat::Error& e) {
    throw e.with_source(cfg.rus_path);
  }
  auto matcher = ucat::compile_matcher(std::move(rus));
  auto parsed = ucat::parse_use_case(ucat::parse_use_case_file(uc_text), matcher);
  if (!parsed.ok()) {
    print_line_errors(parsed, std::cerr);
    throw Diagnosed{};
  }
  return ucat::extract(parsed.statements);
}

ucat::Ontology build_from_config(const PipelineConfig& cfg, bool announce_untyped) {
  auto ex = load_extraction(cfg);
  ucat::TypesFile types;
  if (!cfg.types_path.empty()) {
    try {
      types = ucat::parse_types(ucat::read_file(cfg.types_path));
    } catch (const ucat::Error& e) {
      if (e.code() == ucat::ErrorCode::IoError) throw;
      throw e.with_source(cfg.types_path);
    }
    for (const auto& w : types.warnings)
      std::cerr << "warning: " << cfg.types_path << ":" << w.line << ": " << w.code
                << ": " << w.message << "\n";
  }
  auto report = ucat::validate_assignment(ex.entities, types.types);
  for (const auto& ind : report.unknown_individuals)
    std::cerr << "warning: UnknownIndividual: " << ind << "\n";
  if (!report.ok()) {
    if (!cfg.permissive) {
      std::cerr << "error: " << report.untyped.size()
                << " individual(s) have no class (use --types or --permissive):\n";
      for (const auto& ind : report.untyped) std::cerr << "untyped: " << ind << "\n";
      throw Diagnosed{};
    }
    if (announce_untyped)
      std::cerr << "warning: emitting " << report.untyped.size()
                << " untyped individual(s): " << ucat::text::join(report.untyped, ", ")
                << "\n";
  }
  if (cfg.base_iri.empty())
    throw ucat::Error(ucat::ErrorCode::InvalidIri,
                      "no base IRI: pass --base or set UCAT_BASE_IRI");
  return ucat::build_ontology(cfg.base_iri, ex.entities, ex.tuples, types.classes,
                              types.types, {cfg.permissive});
}

/// Graph from `--ontology file.omn`, or from the full pipeline inputs.
std::pair<ucat::rdf::TripleGraph, std::string> load_graph(const PipelineConfig& cfg) {
  if (!cfg.ontology_path.empty()) {
    ucat::Ontology ont;
    try {
      ont = ucat::parse_manchester(ucat::read_file(cfg.ontology_path));
    } catch (const ucat::Error& e) {
      if (e.code() == ucat::ErrorCode::IoError) throw;
      throw e.with_source(cfg.ontology_path);
    }
    return {ucat::to_triples(ont), ont.ns()};
  }
  auto ont = build_from_config(cfg, false);
  return {ucat::to_triples(ont), ont.ns()};
}

int cmd_validate(const PipelineConfig& cfg) {
  require(cfg.rus_path, "--rus");
  require(cfg.usecase_path, "--usecase");
  auto rus_text = ucat::read_file(cfg.rus_path);
  auto uc_text = ucat::read_file(cfg.usecase_path);
  auto rus_errors = ucat::check_rus(rus_text);
  if (!rus_errors.empty()) {
    for (const auto& e : rus_errors) std::cout << e.with_source(cfg.rus_path).what() << "\n";
    return 1;
  }
  auto matcher = ucat::compile_matcher(ucat::parse_rus(rus_text));
  auto parsed = ucat::parse_use_case(ucat::parse_use_case_file(uc_text), matcher);
  if (parsed.ok()) {
    std::cout << "OK (" << parsed.statements.size() << " statements)\n";
    return 0;
  }
  print_line_errors(parsed, std::cout);
  return 1;
}

int cmd_entities(const PipelineConfig& cfg) {
  auto ex = load_extraction(cfg);
  for (const auto& w : ex.entities.warnings)
    std::cerr << "warning: line " << w.line << ": " << w.code << ": " << w.message << "\n";
  std::cout << ucat::render_entities(ex.entities);
  return 0;
}

int cmd_tuples(const PipelineConfig& cfg) {
  std::cout << ucat::render_tuples(load_extraction(cfg).tuples);
  return 0;
}

int cmd_ontology(const PipelineConfig& cfg) {
  auto ont = build_from_config(cfg, true);
  auto doc = ucat::serialize_manchester(ont);
  const std::string prefix = "PREFIX ont: <" + ont.ns() + ">";
  if (cfg.output_path.empty()) {
    std::cout << doc;
    std::cerr << prefix << "\n";
  } else {
    ucat::write_file(cfg.output_path, doc);
    std::cout << "wrote " << cfg.output_path << "\n" << prefix << "\n";
  }
  return 0;
}

int cmd_query(const PipelineConfig& cfg) {
  require(cfg.query_path, "query file");
  auto qtext = ucat::read_file(cfg.query_path);
  ucat::query::Query q;
  try {
    q = ucat::query::parse_query(qtext);
  } catch (const ucat::Error& e) {
    throw e.with_source(cfg.query_path);
  }
  auto [graph, ns] = load_graph(cfg);
  ucat::query::Evaluator eval(graph);
  if (q.form == ucat::query::Form::Ask) {
    std::cout << (eval.ask(q) ? "true" : "false") << "\n";
  } else {
    std::cout << ucat::render_select(ucat::query::result_variables(q), eval.select(q), ns);
  }
  return 0;
}

int cmd_match(const PipelineConfig& cfg) {
  require(cfg.catalog_dir, "--catalog");
  auto catalog = ucat::load_catalog(ucat::read_catalog_dir(cfg.catalog_dir));
  if (catalog.empty()) return 0;
  auto graph = load_graph(cfg).first;
  for (const auto& e : ucat::match_patterns(catalog, graph).entries)
    std::cout << e.pattern << ": " << (e.matched ? "MATCH" : "no match") << "\n";
  return 0;
}

int cmd_serve(const PipelineConfig& cfg) {
  ucat::service::ServiceOptions opts;
  if (!cfg.catalog_dir.empty())
    opts.catalog = ucat::load_catalog(ucat::read_catalog_dir(cfg.catalog_dir));
  ucat::service::Service svc(std::move(opts));
  httplib::Server server;
  ucat::service::mount(server, svc, cfg.static_dir);
  std::cerr << "listening on http://0.0.0.0:" << cfg.port << "\n";
  if (!server.listen("0.0.0.0", cfg.port)) {
    std::cerr << "error: cannot listen on port " << cfg.port << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucat - use case analysis: RUS statements to OWL and requirements patterns"};
  app.require_subcommand(1);
  PipelineConfig cfg;

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--rus", cfg.rus_path, "RUS grammar file (.rus)");
    sub->add_option("--usecase", cfg.usecase_path, "use-case file");
  };
  auto add_ontology_inputs = [&](CLI::App* sub) {
    add_inputs(sub);
    sub->add_option("--types", cfg.types_path, "types file (.types)");
    sub->add_option("--base", cfg.base_iri, "ontology base IRI")->envname("UCAT_BASE_IRI");
    sub->add_flag("--permissive", cfg.permissive, "allow individuals without a class");
  };

  auto* validate = app.add_subcommand("validate", "check a use case against a RUS file");
  add_inputs(validate);
  auto* entities = app.add_subcommand("entities", "print extracted entities");
  add_inputs(entities);
  auto* tuples = app.add_subcommand("tuples", "print the 4-tuples");
  add_inputs(tuples);
  auto* ontology = app.add_subcommand("ontology", "write the Manchester-syntax ontology");
  add_ontology_inputs(ontology);
  ontology->add_option("--out", cfg.output_path, "output .omn file (stdout if absent)");
  auto* query = app.add_subcommand("query", "run a SPARQL ASK/SELECT query");
  query->add_option("query", cfg.query_path, "query file (.rq)")->required();
  add_ontology_inputs(query);
  query->add_option("--ontology", cfg.ontology_path, "read the ontology from a .omn file");
  auto* match = app.add_subcommand("match", "run every pattern of a catalog directory");
  add_ontology_inputs(match);
  match->add_option("--catalog", cfg.catalog_dir, "directory of .rq pattern files");
  match->add_option("--ontology", cfg.ontology_path, "read the ontology from a .omn file");
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--port", cfg.port, "listen port");
  serve->add_option("--catalog", cfg.catalog_dir, "directory of .rq pattern files");
  serve->add_option("--static", cfg.static_dir, "directory with the web UI bundle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(cfg);
    if (*entities) return cmd_entities(cfg);
    if (*tuples) return cmd_tuples(cfg);
    if (*ontology) return cmd_ontology(cfg);
    if (*query) return cmd_query(cfg);
    if (*match) return cmd_match(cfg);
    if (*serve) return cmd_serve(cfg);
  } catch (const Diagnosed&) {
    return 1;
  } catch (const ucat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ucat::ErrorCode::IoError ? 2 : 1;
  }
  return 0;
}
