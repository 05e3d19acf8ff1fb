// Shared fixtures for the unit tests and the acceptance runner: the model upload
// corpus, its frozen expected outputs, and seeded generators for property checks.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "ucat/ontology.hpp"
#include "ucat/pipeline.hpp"
#include "ucat/query.hpp"
#include "ucat/rdf.hpp"
#include "ucat/rus_grammar.hpp"
#include "ucat/type_assignment.hpp"
#include "ucat/usecase_parser.hpp"

namespace ucat::testing {

inline const std::string kSamples = UCAT_SAMPLES_DIR;
inline const std::string kBase = "http://www.url.com/Requirements";

inline std::string sample(const std::string& name) { return read_file(kSamples + "/" + name); }

inline const std::vector<std::string> kRelations = {"clicks",    "requests", "inserts",
                                                    "validates", "creates",  "list"};
inline const std::vector<std::string> kIndividuals = {
    "user",  "newModel", "system", "name", "description", "scope",
    "language", "file",  "image",  "save", "model",       "models"};

inline const std::vector<std::string> kTuples = {
    "Individual:,user,Facts:,clicks newModel",
    "Individual:,system,Facts:,requests name",
    "Individual:,system,Facts:,requests description",
    "Individual:,system,Facts:,requests scope",
    "Individual:,system,Facts:,requests language",
    "Individual:,system,Facts:,requests file",
    "Individual:,system,Facts:,requests image",
    "Individual:,user,Facts:,inserts name",
    "Individual:,user,Facts:,inserts description",
    "Individual:,user,Facts:,inserts scope",
    "Individual:,user,Facts:,inserts language",
    "Individual:,user,Facts:,inserts file",
    "Individual:,user,Facts:,inserts image",
    "Individual:,user,Facts:,clicks save",
    "Individual:,system,Facts:,validates name",
    "Individual:,system,Facts:,validates description",
    "Individual:,system,Facts:,validates scope",
    "Individual:,system,Facts:,validates language",
    "Individual:,system,Facts:,validates file",
    "Individual:,system,Facts:,validates image",
    "Individual:,system,Facts:,creates model",
    "Individual:,system,Facts:,list models",
};

inline const std::string kListing3 =
    "r:clicks,requests,inserts,validates,creates,list,\n"
    "i:user,newModel,system,name,description,scope,language,file,image,save,model,models,\n";

inline StatementMatcher sample_matcher() {
  return compile_matcher(parse_rus(sample("model_upload.rus")));
}

inline ParsedUseCase parse_text(const std::string& usecase,
                                const StatementMatcher& m = sample_matcher()) {
  return parse_use_case(parse_use_case_file(usecase), m);
}

/// Use-case text through to ontology, with the sample types file.
inline Ontology ontology_from(const std::string& usecase, const std::string& base = kBase) {
  auto parsed = parse_text(usecase);
  if (!parsed.ok())
    throw Error(ErrorCode::NoRuleMatches, "fixture use case has invalid lines");
  auto ex = extract(parsed.statements);
  auto types = parse_types(sample("model_upload.types"));
  return build_ontology(base, ex.entities, ex.tuples, types.classes, types.types);
}

inline Ontology golden_ontology() { return ontology_from(sample("model_upload.usecase")); }

inline std::string without_line(std::string text, const std::string& line) {
  auto at = text.find(line);
  if (at != std::string::npos) text.erase(at, line.size());
  return text;
}

// ---------------------------------------------------------------------------
// Generators

/// Small random graphs and BGP + NOT EXISTS queries over a shared vocabulary,
/// sized to stay inside the brute-force oracle bounds.
class QueryCaseGenerator {
 public:
  explicit QueryCaseGenerator(std::uint32_t seed) : rng_(seed) {}

  rdf::TripleGraph graph() {
    rdf::TripleGraph g;
    const std::size_t n = pick(0, 4) == 0 ? pick(0, 5) : pick(10, 50);
    for (std::size_t i = 0; i < n; ++i) {
      auto roll = pick(0, 9);
      if (roll == 0)
        g.insert({cls(), iri(rdf::vocab::sub_class_of()), cls()});
      else if (roll <= 2)
        g.insert({node(), iri(rdf::vocab::type()), cls()});
      else if (roll == 3)
        g.insert({node(), pred(), rdf::Term::literal(std::string(1, char('a' + pick(0, 2))))});
      else
        g.insert({node(), pred(), node()});
    }
    return g;
  }

  query::Query query() {
    query::Query q;
    q.form = pick(0, 3) == 0 ? query::Form::Ask : query::Form::Select;
    const std::size_t npat = pick(1, 3);
    for (std::size_t i = 0; i < npat; ++i) q.body.patterns.push_back(pattern(3));
    if (pick(0, 1) == 1) {
      query::GroupPattern inner;
      const std::size_t k = pick(1, 2);
      for (std::size_t i = 0; i < k; ++i) inner.patterns.push_back(pattern(5));
      q.body.not_exists.push_back(std::move(inner));
    }
    if (q.form == query::Form::Select) {
      auto vars = query::pattern_variables(q.body);
      if (vars.empty() || pick(0, 2) == 0) {
        q.select_all = true;
      } else {
        for (const auto& v : vars)
          if (pick(0, 1) == 1) q.projection.push_back(v);
        if (q.projection.empty()) q.projection.push_back(vars.front());
      }
    }
    return q;
  }

  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

 private:
  static rdf::Term iri(const std::string& s) { return rdf::Term::iri(s); }
  rdf::Term node() { return iri("urn:n" + std::to_string(pick(0, 5))); }
  rdf::Term cls() { return iri("urn:C" + std::to_string(pick(0, 3))); }
  rdf::Term pred() { return iri("urn:p" + std::to_string(pick(0, 2))); }

  /// Variables `?v0`..`?v{nvars-1}`; outer patterns use the first three only.
  query::PatternTerm slot(std::size_t nvars, int position) {
    if (pick(0, 9) < 7)
      return query::Variable{"v" + std::to_string(pick(0, nvars - 1))};
    if (position == 1) {
      auto roll = pick(0, 4);
      if (roll == 0) return iri(rdf::vocab::type());
      if (roll == 1) return iri(rdf::vocab::sub_class_of());
      return pred();
    }
    if (position == 2 && pick(0, 3) == 0) return cls();
    if (position == 2 && pick(0, 5) == 0) return rdf::Term::literal("a");
    return node();
  }

  query::TriplePattern pattern(std::size_t nvars) {
    return {slot(nvars, 0), slot(nvars, 1), slot(nvars, 2)};
  }

  std::mt19937 rng_;
};

/// Internally consistent random ontologies: every referenced entity is declared,
/// subclass edges point to earlier classes only.
class OntologyGenerator {
 public:
  explicit OntologyGenerator(std::uint32_t seed) : rng_(seed) {}

  Ontology next() {
    Ontology o = empty_ontology("http://example.org/gen" + std::to_string(pick(0, 99)));
    const std::size_t nc = pick(0, 5), no = pick(0, 3), nd = pick(0, 3), ni = pick(0, 6);
    for (std::size_t c = 0; c < nc; ++c) {
      auto& parents = o.classes["C" + std::to_string(c)];
      for (std::size_t p = 0; p < c; ++p)
        if (pick(0, 3) == 0) parents.insert("C" + std::to_string(p));
    }
    for (std::size_t i = 0; i < no; ++i) o.object_properties.insert("op" + std::to_string(i));
    for (std::size_t i = 0; i < nd; ++i) o.data_properties.insert("dp" + std::to_string(i));
    for (std::size_t i = 0; i < ni; ++i) o.individuals["ind" + std::to_string(i)];
    for (auto& [name, rec] : o.individuals) {
      for (std::size_t c = 0; c < nc; ++c)
        if (pick(0, 2) == 0) rec.types.insert("C" + std::to_string(c));
      const std::size_t nf = pick(0, 4);
      for (std::size_t f = 0; f < nf; ++f) {
        Fact fact;
        fact.negated = pick(0, 4) == 0;
        if (nd > 0 && pick(0, 2) == 0) {
          fact.property = "dp" + std::to_string(pick(0, nd - 1));
          static const std::vector<std::string> values = {"", "plain", "two words",
                                                          "q\"uote", "back\\slash", "a,b"};
          Literal lit{values[pick(0, values.size() - 1)]};
          if (pick(0, 3) == 0) lit.datatype = std::string(rdf::vocab::xsd) + "integer";
          fact.object = lit;
        } else if (no > 0) {
          fact.property = "op" + std::to_string(pick(0, no - 1));
          fact.object = "ind" + std::to_string(pick(0, ni - 1));
        } else {
          continue;
        }
        if (std::find(rec.facts.begin(), rec.facts.end(), fact) == rec.facts.end())
          rec.facts.push_back(std::move(fact));
      }
    }
    return o;
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  std::mt19937 rng_;
};

/// Multi statements `<subject> <rel> : i1, ..., iN` for the sample rules.
inline std::string multi_statement(std::mt19937& rng, std::size_t items) {
  auto word = [&](const char* stem) {
    return std::string(stem) + std::to_string(std::uniform_int_distribution<int>(0, 9)(rng));
  };
  std::string s = word("actor") + " " + word("rel") + " :";
  for (std::size_t i = 0; i < items; ++i) s += (i ? ", " : " ") + word("item");
  return s;
}

}  // namespace ucat::testing
