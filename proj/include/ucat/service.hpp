/**
 * @brief Session-based pipeline service behind the JSON API.
 *
 * Transport independent: every operation takes and returns JSON plus an HTTP
 * status, so the HTTP binding in http_server.hpp stays a thin router.
 * Stages run in order rus -> usecase -> extract -> types -> ontology;
 * writing a stage discards every later one.
 */
#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucat/error.hpp"
#include "ucat/ontology.hpp"
#include "ucat/pattern_catalog.hpp"
#include "ucat/pipeline.hpp"
#include "ucat/query.hpp"
#include "ucat/query_eval.hpp"
#include "ucat/rus_grammar.hpp"
#include "ucat/type_assignment.hpp"
#include "ucat/usecase_parser.hpp"

namespace ucat::service {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct ApiResponse {
  int status = 200;
  json body;
};

inline json error_json(ErrorCode code, const std::string& message,
                       std::optional<std::size_t> line = std::nullopt,
                       std::optional<std::size_t> column = std::nullopt) {
  json j{{"code", std::string(to_string(code))}, {"message", message}};
  if (line) j["line"] = *line;
  if (column && *column) j["column"] = *column;
  return j;
}

inline json error_json(const Error& e) {
  return error_json(e.code(), e.message(), e.line(),
                    e.pos().column ? std::optional(e.pos().column) : std::nullopt);
}

inline ApiResponse error_response(int status, const Error& e) {
  return {status, error_json(e)};
}

inline std::string role_name(Role r) {
  return r == Role::UserInput ? "user" : "system";
}

enum class Stage { Empty, Rus, UseCase, Extracted, Typed, Ontology };

inline std::string stage_name(Stage s) {
  switch (s) {
    case Stage::Empty: return "empty";
    case Stage::Rus: return "rus";
    case Stage::UseCase: return "usecase";
    case Stage::Extracted: return "extracted";
    case Stage::Typed: return "typed";
    case Stage::Ontology: return "ontology";
  }
  return "empty";
}

struct Session {
  std::mutex mu;
  Clock::time_point last_access;

  std::optional<std::string> rus_text;
  std::optional<StatementMatcher> matcher;
  std::optional<std::vector<UseCaseLine>> lines;
  std::optional<ParsedUseCase> parsed;
  std::optional<Extraction> extraction;
  std::optional<TypesFile> types;
  std::optional<ValidationReport> report;
  std::optional<std::string> base;
  std::optional<Ontology> ontology;
  std::optional<std::string> manchester;
  std::optional<rdf::TripleGraph> graph;

  Stage stage() const {
    if (ontology) return Stage::Ontology;
    if (types) return Stage::Typed;
    if (extraction) return Stage::Extracted;
    if (lines) return Stage::UseCase;
    if (matcher) return Stage::Rus;
    return Stage::Empty;
  }

  /// Drops every artifact of stages after `keep`.
  void invalidate_after(Stage keep) {
    if (keep < Stage::Ontology) {
      base.reset();
      ontology.reset();
      manchester.reset();
      graph.reset();
    }
    if (keep < Stage::Typed) {
      types.reset();
      report.reset();
    }
    if (keep < Stage::Extracted) extraction.reset();
    if (keep < Stage::UseCase) {
      lines.reset();
      parsed.reset();
    }
    if (keep < Stage::Rus) {
      rus_text.reset();
      matcher.reset();
    }
  }
};

namespace detail {

inline json entities_json(const EntitySet& e) {
  json warnings = json::array();
  for (const auto& w : e.warnings)
    warnings.push_back({{"code", w.code}, {"message", w.message}, {"line", w.line}});
  return {{"individuals", e.individuals.items()},
          {"relations", e.relations.items()},
          {"data_properties", e.data_properties.items()},
          {"types", e.types.items()},
          {"warnings", warnings}};
}

inline json tuples_json(const std::vector<TupleStatement>& tuples) {
  json out = json::array();
  for (const auto& t : tuples) out.push_back(t.render());
  return out;
}

inline json usecase_json(const std::vector<UseCaseLine>& lines,
                         const ParsedUseCase& parsed) {
  std::map<std::size_t, const Statement*> ok;
  for (const auto& s : parsed.statements) ok[s.origin.line_number] = &s;
  std::map<std::size_t, const LineError*> bad;
  for (const auto& e : parsed.errors) bad[e.line_number] = &e;

  json rows = json::array();
  for (const auto& l : lines) {
    json row{{"line", l.line_number}, {"role", role_name(l.role)}, {"text", l.text}};
    if (auto it = ok.find(l.line_number); it != ok.end()) {
      row["valid"] = true;
      row["rule"] = it->second->rule_index + 1;
    } else if (auto e = bad.find(l.line_number); e != bad.end()) {
      row["valid"] = false;
      json reasons = json::array();
      for (const auto& f : e->second->failures)
        reasons.push_back({{"rule", f.rule_index + 1}, {"reason", f.reason}});
      row["error"] = error_json(ErrorCode::NoRuleMatches,
                                "statement matches no RUS rule", l.line_number);
      row["error"]["reasons"] = reasons;
    }
    rows.push_back(std::move(row));
  }
  return {{"valid", parsed.ok()}, {"lines", rows}};
}

inline json report_json(const ValidationReport& r, const std::vector<Warning>& warnings) {
  json w = json::array();
  for (const auto& x : warnings)
    w.push_back({{"code", x.code}, {"message", x.message}, {"line", x.line}});
  for (const auto& ind : r.unknown_individuals)
    w.push_back({{"code", "UnknownIndividual"},
                 {"message", "'" + ind + "' does not occur in the use case"}});
  return {{"ok", r.ok()},
          {"untyped", r.untyped},
          {"unknown_individuals", r.unknown_individuals},
          {"warnings", w}};
}

/// Reads use-case lines from `{"text": "..."}` or
/// `{"lines": [{"role": "user"|"system", "text": "..."}]}`.
inline std::vector<UseCaseLine> lines_from_json(const json& body) {
  if (body.contains("text")) {
    if (!body["text"].is_string())
      throw Error(ErrorCode::SyntaxError, "'text' must be a string");
    return parse_use_case_file(body["text"].get<std::string>());
  }
  if (!body.contains("lines") || !body["lines"].is_array())
    throw Error(ErrorCode::SyntaxError, "expected 'lines' array or 'text' string");
  std::vector<UseCaseLine> out;
  std::size_t n = 0;
  for (const auto& row : body["lines"]) {
    ++n;
    std::string stmt;
    std::string role = "user";
    if (row.is_string()) {
      stmt = row.get<std::string>();
    } else if (row.is_object() && row.contains("text") && row["text"].is_string()) {
      stmt = row["text"].get<std::string>();
      if (row.contains("role")) {
        if (!row["role"].is_string())
          throw Error(ErrorCode::SyntaxError, "'role' must be a string", {n, 0});
        role = row["role"].get<std::string>();
      }
    } else {
      throw Error(ErrorCode::SyntaxError, "line entry needs a 'text' string", {n, 0});
    }
    if (role != "user" && role != "system")
      throw Error(ErrorCode::SyntaxError, "role must be 'user' or 'system'", {n, 0});
    auto trimmed = std::string(text::trim(stmt));
    if (trimmed.empty()) continue;
    out.push_back({trimmed, role == "user" ? Role::UserInput : Role::SystemResponse, n});
  }
  return out;
}

/// Reads types from `{"text": "..."}` or
/// `{"classes": [{"name": "A", "parents": ["B"]}], "assignments": {"x": ["A"]}}`.
inline TypesFile types_from_json(const json& body) {
  if (body.contains("text")) {
    if (!body["text"].is_string())
      throw Error(ErrorCode::SyntaxError, "'text' must be a string");
    return parse_types(body["text"].get<std::string>());
  }
  std::vector<ClassDecl> classes;
  TypeMap types;
  try {
    const json class_list = body.value("classes", json::array());
    const json assignment_map = body.value("assignments", json::object());
    for (const auto& c : class_list) {
      ClassDecl d;
      if (c.is_string()) {
        d.name = c.get<std::string>();
      } else {
        d.name = c.at("name").get<std::string>();
        for (const auto& p : c.value("parents", json::array()))
          d.parents.insert(p.get<std::string>());
      }
      classes.push_back(std::move(d));
    }
    for (const auto& [ind, cls] : assignment_map.items()) {
      auto& set = types.assignments[ind];
      for (const auto& c : cls) set.insert(c.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SyntaxError, std::string("malformed types body: ") + e.what());
  }
  // Round-trip through the text format so both inputs share one validator.
  return parse_types(render_types(classes, types));
}

}  // namespace detail

struct ServiceOptions {
  std::chrono::minutes idle_expiry{60};
  std::vector<Pattern> catalog;
  /// Injectable for expiry tests.
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

class Service {
 public:
  explicit Service(ServiceOptions opts = {})
      : opts_(std::move(opts)), rng_(std::random_device{}()) {}

  ApiResponse create_session() {
    auto s = std::make_shared<Session>();
    s->last_access = opts_.now();
    std::string id;
    {
      std::lock_guard lock(mu_);
      expire_locked();
      do {
        id = new_id_locked();
      } while (sessions_.count(id));
      sessions_[id] = s;
    }
    return {201, {{"id", id}}};
  }

  std::size_t session_count() {
    std::lock_guard lock(mu_);
    expire_locked();
    return sessions_.size();
  }

  ApiResponse get_session(const std::string& id) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      json j{{"id", id}, {"stage", stage_name(s.stage())}};
      j["rus"] = s.rus_text ? json(*s.rus_text) : json(nullptr);
      j["usecase"] = s.lines ? detail::usecase_json(*s.lines, *s.parsed) : json(nullptr);
      if (s.extraction) {
        j["entities"] = detail::entities_json(s.extraction->entities);
        j["tuples"] = detail::tuples_json(s.extraction->tuples);
      } else {
        j["entities"] = nullptr;
        j["tuples"] = nullptr;
      }
      if (s.types) {
        j["types"] = render_types(s.types->classes, s.types->types);
        j["report"] = detail::report_json(*s.report, s.types->warnings);
      } else {
        j["types"] = nullptr;
        j["report"] = nullptr;
      }
      j["base"] = s.base ? json(*s.base) : json(nullptr);
      j["ontology"] = s.manchester ? json(*s.manchester) : json(nullptr);
      return {200, j};
    });
  }

  ApiResponse put_rus(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!body.is_object() || !body.contains("text") || !body["text"].is_string())
        return {400, error_json(ErrorCode::SyntaxError, "expected {\"text\": string}")};
      const auto src = body["text"].get<std::string>();
      s.invalidate_after(Stage::Empty);
      auto errors = check_rus(src);
      if (!errors.empty()) {
        json list = json::array();
        for (const auto& e : errors) list.push_back(error_json(e));
        json j = error_json(ErrorCode::InvalidPattern, "RUS file has errors");
        j["errors"] = list;
        return {422, j};
      }
      auto rus = parse_rus(src);
      json rules = json::array();
      for (const auto& r : rus.rules)
        rules.push_back({{"line", r.source_line}, {"pattern", render_pattern(r)}});
      s.rus_text = src;
      s.matcher = compile_matcher(std::move(rus));
      return {200, {{"ok", true}, {"rules", rules}}};
    });
  }

  ApiResponse put_usecase(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!s.matcher) return stage_error("upload a RUS file first");
      std::vector<UseCaseLine> lines;
      try {
        lines = detail::lines_from_json(body);
      } catch (const Error& e) {
        return error_response(400, e);
      }
      s.invalidate_after(Stage::Rus);
      s.parsed = parse_use_case(lines, *s.matcher);
      s.lines = std::move(lines);
      return {200, detail::usecase_json(*s.lines, *s.parsed)};
    });
  }

  ApiResponse extract(const std::string& id) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!s.lines) return stage_error("upload a use case first");
      if (!s.parsed->ok())
        return stage_error(std::to_string(s.parsed->errors.size()) +
                           " use-case line(s) do not match the RUS rules");
      if (!s.extraction) {
        try {
          s.extraction = ucat::extract(s.parsed->statements);
        } catch (const Error& e) {
          return error_response(422, e);
        }
      }
      return {200,
              {{"entities", detail::entities_json(s.extraction->entities)},
               {"tuples", detail::tuples_json(s.extraction->tuples)}}};
    });
  }

  ApiResponse put_types(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!s.extraction) return stage_error("extract entities first");
      if (!body.is_object())
        return {400, error_json(ErrorCode::SyntaxError, "expected a JSON object")};
      TypesFile tf;
      try {
        tf = detail::types_from_json(body);
      } catch (const Error& e) {
        return error_response(e.code() == ErrorCode::SyntaxError ? 400 : 422, e);
      }
      s.invalidate_after(Stage::Extracted);
      s.report = validate_assignment(s.extraction->entities, tf.types);
      s.types = std::move(tf);
      return {200, detail::report_json(*s.report, s.types->warnings)};
    });
  }

  ApiResponse generate_ontology(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!s.extraction) return stage_error("extract entities first");
      const bool permissive = body.is_object() && body.value("permissive", false);
      if (!s.types && !permissive) return stage_error("assign types first");
      if (s.report && !s.report->ok() && !permissive)
        return stage_error("untyped individuals remain: " +
                           text::join(s.report->untyped, ", "));
      if (!body.is_object() || !body.contains("base") || !body["base"].is_string())
        return {400, error_json(ErrorCode::SyntaxError, "expected {\"base\": string}")};
      try {
        static const TypesFile none;
        const TypesFile& tf = s.types ? *s.types : none;
        auto ont = build_ontology(body["base"].get<std::string>(), s.extraction->entities,
                                  s.extraction->tuples, tf.classes, tf.types,
                                  {permissive});
        s.invalidate_after(Stage::Typed);
        s.manchester = serialize_manchester(ont);
        s.graph = to_triples(ont);
        s.base = ont.base;
        s.ontology = std::move(ont);
      } catch (const Error& e) {
        return error_response(422, e);
      }
      return {200,
              {{"base", *s.base},
               {"prefix", "PREFIX ont: <" + s.ontology->ns() + ">"},
               {"manchester", *s.manchester}}};
    });
  }

  ApiResponse run_query(const std::string& id, const json& body) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!s.graph) return stage_error("generate the ontology first");
      if (!body.is_object() || !body.contains("query") || !body["query"].is_string())
        return {400, error_json(ErrorCode::SyntaxError, "expected {\"query\": string}")};
      query::Query q;
      try {
        q = query::parse_query(body["query"].get<std::string>());
      } catch (const Error& e) {
        return error_response(400, e);
      }
      query::Evaluator eval(*s.graph);
      if (q.form == query::Form::Ask) return {200, {{"form", "ask"}, {"result", eval.ask(q)}}};
      auto vars = query::result_variables(q);
      auto rows = eval.select(q);
      const auto prefixes = rdf::vocab::standard_prefixes();
      json jrows = json::array();
      for (const auto& b : rows) {
        json r = json::array();
        for (const auto& v : vars) {
          auto it = b.find(v);
          r.push_back(it == b.end() ? json(nullptr)
                                    : json(compact_term(it->second, s.ontology->ns(),
                                                        prefixes)));
        }
        jrows.push_back(std::move(r));
      }
      return {200, {{"form", "select"}, {"variables", vars}, {"rows", jrows}}};
    });
  }

  ApiResponse run_catalog(const std::string& id) {
    return with_session(id, [&](Session& s) -> ApiResponse {
      if (!s.graph) return stage_error("generate the ontology first");
      auto report = match_patterns(opts_.catalog, *s.graph);
      json list = json::array();
      for (std::size_t i = 0; i < report.entries.size(); ++i)
        list.push_back({{"pattern", report.entries[i].pattern},
                        {"description", opts_.catalog[i].description},
                        {"matched", report.entries[i].matched}});
      return {200, {{"report", list}}};
    });
  }

 private:
  static ApiResponse stage_error(const std::string& msg) {
    return {409, error_json(ErrorCode::StageError, msg)};
  }

  template <typename F>
  ApiResponse with_session(const std::string& id, F&& f) {
    std::shared_ptr<Session> s;
    {
      std::lock_guard lock(mu_);
      expire_locked();
      auto it = sessions_.find(id);
      if (it == sessions_.end())
        return {404, error_json(ErrorCode::UnknownSession, "no session '" + id + "'")};
      s = it->second;
      s->last_access = opts_.now();
    }
    std::lock_guard slock(s->mu);
    return f(*s);
  }

  void expire_locked() {
    const auto now = opts_.now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (now - it->second->last_access > opts_.idle_expiry)
        it = sessions_.erase(it);
      else
        ++it;
    }
  }

  std::string new_id_locked() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (int i = 0; i < 2; ++i) {
      auto v = rng_();
      for (int k = 0; k < 16; ++k) id.push_back(hex[(v >> (4 * k)) & 0xf]);
    }
    return id;
  }

  ServiceOptions opts_;
  std::mutex mu_;
  std::mt19937_64 rng_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace ucat::service
