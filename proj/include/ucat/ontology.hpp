/**
 * @brief In-memory OWL model built from extracted tuples, its Manchester
 * serialization and its triple view.
 *
 * Every entity IRI is `base#local`. The model keeps local names only; the
 * base lives on the Ontology.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/rdf.hpp"
#include "ucat/text.hpp"
#include "ucat/type_assignment.hpp"
#include "ucat/usecase_parser.hpp"

namespace ucat {

/// Absolute IRI: `scheme:rest` with no whitespace or `<>"{}|^\``.
inline bool is_absolute_iri(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= s.size())
    return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = s[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return false;
  }
  for (char c : s)
    if (text::is_space(c) || std::string_view("<>\"{}|^`\\").find(c) !=
                                 std::string_view::npos)
      return false;
  return true;
}

/// Validates a base IRI for the `base#local` scheme; a trailing `#` is dropped.
inline std::string normalize_base(std::string_view base) {
  std::string b(text::trim(base));
  if (!b.empty() && b.back() == '#') b.pop_back();
  if (!is_absolute_iri(b))
    throw Error(ErrorCode::InvalidIri, "'" + b + "' is not an absolute IRI");
  if (b.find('#') != std::string::npos)
    throw Error(ErrorCode::InvalidIri,
                "base IRI '" + b + "' must not contain a fragment");
  return b;
}

struct Literal {
  std::string value;
  std::string datatype = rdf::vocab::xsd_string();

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;
};

struct Fact {
  bool negated = false;
  std::string property;
  /// Individual local name or literal.
  std::variant<std::string, Literal> object;

  bool operator==(const Fact&) const = default;
  bool has_literal() const { return std::holds_alternative<Literal>(object); }
};

struct IndividualRecord {
  std::set<std::string> types;
  std::vector<Fact> facts;

  bool operator==(const IndividualRecord&) const = default;
};

struct Ontology {
  std::string base;
  std::map<std::string, std::string> prefixes;
  /// class -> parent classes
  std::map<std::string, std::set<std::string>> classes;
  std::set<std::string> object_properties;
  std::set<std::string> data_properties;
  std::map<std::string, IndividualRecord> individuals;

  bool operator==(const Ontology&) const = default;

  std::string iri(std::string_view local) const {
    return base + "#" + std::string(local);
  }
  /// Namespace the `ont` prefix maps to.
  std::string ns() const { return base + "#"; }

  std::size_t fact_count(bool include_negated = true) const {
    std::size_t n = 0;
    for (const auto& [_, rec] : individuals)
      for (const auto& f : rec.facts) n += include_negated || !f.negated;
    return n;
  }
};

/// owl, rdf, rdfs, xsd and `ont` bound to the ontology namespace.
inline std::map<std::string, std::string> default_prefixes(const std::string& base) {
  auto p = rdf::vocab::standard_prefixes();
  p["ont"] = base + "#";
  return p;
}

inline Ontology empty_ontology(std::string_view base) {
  Ontology o;
  o.base = normalize_base(base);
  o.prefixes = default_prefixes(o.base);
  return o;
}

namespace detail {

inline void require_local_name(std::string_view name, std::string_view what) {
  if (!text::is_local_name(name))
    throw Error(ErrorCode::IllegalLocalName,
                std::string(what) + " '" + std::string(name) +
                    "' is not a valid IRI local name ([A-Za-z][A-Za-z0-9_]*)");
}

/// Splits a fact value on whitespace, keeping double-quoted runs intact.
inline std::vector<std::string> split_fact_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quoted) {
      cur.push_back(c);
      if (c == '\\' && i + 1 < s.size()) {
        cur.push_back(s[++i]);
      } else if (c == '"') {
        quoted = false;
      }
    } else if (text::is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      if (c == '"') quoted = true;
      cur.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::MalformedFactValue, "unterminated string literal");
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// Expands `pfx:local` with the given prefixes, or unwraps `<iri>`.
inline std::string expand_datatype(std::string_view dt,
                                   const std::map<std::string, std::string>& prefixes) {
  if (dt.size() >= 2 && dt.front() == '<' && dt.back() == '>')
    return std::string(dt.substr(1, dt.size() - 2));
  auto colon = dt.find(':');
  if (colon != std::string_view::npos) {
    auto it = prefixes.find(std::string(dt.substr(0, colon)));
    if (it != prefixes.end()) return it->second + std::string(dt.substr(colon + 1));
  }
  throw Error(ErrorCode::MalformedFactValue,
              "unknown literal datatype '" + std::string(dt) + "'");
}

/// Parses `"text"` optionally followed by `^^datatype`.
inline Literal parse_literal(std::string_view tok,
                             const std::map<std::string, std::string>& prefixes) {
  if (tok.empty() || tok.front() != '"')
    throw Error(ErrorCode::MalformedFactValue,
                "literal must start with '\"': " + std::string(tok));
  Literal lit;
  std::size_t i = 1;
  bool closed = false;
  for (; i < tok.size(); ++i) {
    if (tok[i] == '\\' && i + 1 < tok.size()) {
      lit.value.push_back(tok[++i]);
    } else if (tok[i] == '"') {
      closed = true;
      ++i;
      break;
    } else {
      lit.value.push_back(tok[i]);
    }
  }
  if (!closed)
    throw Error(ErrorCode::MalformedFactValue,
                "unterminated literal: " + std::string(tok));
  auto rest = tok.substr(i);
  if (rest.empty()) return lit;
  if (rest.substr(0, 2) != "^^" || rest.size() == 2)
    throw Error(ErrorCode::MalformedFactValue,
                "expected '^^datatype' after literal: " + std::string(tok));
  lit.datatype = expand_datatype(rest.substr(2), prefixes);
  return lit;
}

}  // namespace detail

/// Parses a rendered `Facts:` value: `[not] property object` or
/// `[not] property"literal"^^dt` (the literal may also be space separated).
inline Fact parse_fact_value(std::string_view value,
                             const std::map<std::string, std::string>& prefixes) {
  auto toks = detail::split_fact_tokens(value);
  Fact f;
  if (!toks.empty() && toks.front() == "not") {
    f.negated = true;
    toks.erase(toks.begin());
  }
  if (toks.size() == 1) {
    auto q = toks[0].find('"');
    if (q == std::string::npos || q == 0)
      throw Error(ErrorCode::MalformedFactValue,
                  "fact value '" + std::string(value) +
                      "' needs a property and an object");
    f.property = toks[0].substr(0, q);
    f.object = detail::parse_literal(std::string_view(toks[0]).substr(q), prefixes);
    return f;
  }
  if (toks.size() != 2)
    throw Error(ErrorCode::MalformedFactValue,
                "fact value '" + std::string(value) +
                    "' must be '[not] <property> <object>'");
  f.property = toks[0];
  if (toks[1].front() == '"')
    f.object = detail::parse_literal(toks[1], prefixes);
  else
    f.object = toks[1];
  return f;
}

struct BuildOptions {
  /// Emit individuals lacking a class instead of failing.
  bool permissive = false;
};

inline Ontology build_ontology(std::string_view base, const EntitySet& entities,
                               const std::vector<TupleStatement>& tuples,
                               const std::vector<ClassDecl>& classes,
                               const TypeMap& types, BuildOptions opts = {}) {
  Ontology ont = empty_ontology(base);

  if (!opts.permissive) {
    auto report = validate_assignment(entities, types);
    if (!report.ok())
      throw Error(ErrorCode::UntypedIndividuals,
                  "individuals without a class: " + text::join(report.untyped, ", "));
  }

  check_acyclic(classes);
  for (const auto& c : classes) {
    detail::require_local_name(c.name, "class");
    auto& parents = ont.classes[c.name];
    for (const auto& p : c.parents) {
      detail::require_local_name(p, "class");
      parents.insert(p);
      ont.classes.try_emplace(p);
    }
  }
  for (const auto& t : entities.types) {
    detail::require_local_name(t, "class");
    ont.classes.try_emplace(t);
  }
  for (const auto& r : entities.relations) {
    detail::require_local_name(r, "object property");
    ont.object_properties.insert(r);
  }
  for (const auto& d : entities.data_properties) {
    detail::require_local_name(d, "data property");
    ont.data_properties.insert(d);
  }
  for (const auto& i : entities.individuals) {
    detail::require_local_name(i, "individual");
    ont.individuals.try_emplace(i);
  }

  for (const auto& [ind, cls] : types.assignments) {
    auto it = ont.individuals.find(ind);
    if (it == ont.individuals.end()) continue;  // reported by validate_assignment
    for (const auto& c : cls) {
      if (!ont.classes.count(c))
        throw Error(ErrorCode::UndeclaredClass, "class '" + c + "' is not declared");
      it->second.types.insert(c);
    }
  }

  for (const auto& t : tuples) {
    if (t.entity_kind != "Individual:")
      throw Error(ErrorCode::MalformedFactValue,
                  "unsupported tuple entity kind '" + t.entity_kind + "' in " +
                      t.render());
    auto it = ont.individuals.find(t.entity);
    if (it == ont.individuals.end())
      throw Error(ErrorCode::UnknownEntityInTuple,
                  "'" + t.entity + "' is not a declared individual: " + t.render());
    auto& rec = it->second;

    if (t.property == "Types:") {
      for (const auto& piece : text::split_trim(t.value, ',')) {
        for (const auto& cls : text::split_ws(piece)) {
          if (!ont.classes.count(cls))
            throw Error(ErrorCode::UnknownEntityInTuple,
                        "'" + cls + "' is not a declared class: " + t.render());
          rec.types.insert(cls);
        }
      }
      continue;
    }
    if (t.property != "Facts:")
      throw Error(ErrorCode::MalformedFactValue,
                  "unsupported tuple property '" + t.property + "' in " + t.render());

    Fact f;
    try {
      f = parse_fact_value(t.value, ont.prefixes);
    } catch (const Error& e) {
      throw Error(e.code(), e.message() + " (tuple " + t.render() + ")");
    }
    if (f.has_literal()) {
      if (!ont.data_properties.count(f.property))
        throw Error(ErrorCode::UnknownEntityInTuple,
                    "'" + f.property + "' is not a declared data property: " +
                        t.render());
    } else {
      if (!ont.object_properties.count(f.property))
        throw Error(ErrorCode::UnknownEntityInTuple,
                    "'" + f.property + "' is not a declared object property: " +
                        t.render());
      const auto& obj = std::get<std::string>(f.object);
      if (!ont.individuals.count(obj))
        throw Error(ErrorCode::UnknownEntityInTuple,
                    "'" + obj + "' is not a declared individual: " + t.render());
    }
    if (std::find(rec.facts.begin(), rec.facts.end(), f) == rec.facts.end())
      rec.facts.push_back(std::move(f));
  }
  return ont;
}

// ---------------------------------------------------------------------------
// Manchester serialization

namespace detail {

inline std::string render_literal(const Literal& lit,
                                  const std::map<std::string, std::string>& prefixes) {
  std::string out = "\"";
  for (char c : lit.value) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out += "\"^^";
  for (const auto& [label, ns] : prefixes) {
    if (label == "ont") continue;
    if (lit.datatype.size() > ns.size() && lit.datatype.compare(0, ns.size(), ns) == 0 &&
        text::is_local_name(std::string_view(lit.datatype).substr(ns.size())))
      return out + label + ":" + lit.datatype.substr(ns.size());
  }
  return out + "<" + lit.datatype + ">";
}

}  // namespace detail

/// Deterministic Manchester-syntax document: prefixes, the ontology header,
/// then Class, ObjectProperty, DataProperty and Individual frames, each group
/// in alphabetical order.
inline std::string serialize_manchester(const Ontology& ont) {
  std::string out;
  for (const auto& [label, ns] : ont.prefixes)
    out += "Prefix: " + label + ": <" + ns + ">\n";
  out += "\nOntology: <" + ont.base + ">\n";

  auto ref = [&](const std::string& local) { return "<" + ont.iri(local) + ">"; };

  for (const auto& [cls, parents] : ont.classes) {
    out += "\nClass: " + ref(cls) + "\n";
    for (const auto& p : parents) out += "  SubClassOf: " + ref(p) + "\n";
  }
  for (const auto& p : ont.object_properties)
    out += "\nObjectProperty: " + ref(p) + "\n";
  for (const auto& p : ont.data_properties)
    out += "\nDataProperty: " + ref(p) + "\n";
  for (const auto& [name, rec] : ont.individuals) {
    out += "\nIndividual: " + ref(name) + "\n";
    if (!rec.types.empty()) {
      std::vector<std::string> refs;
      for (const auto& t : rec.types) refs.push_back(ref(t));
      out += "  Types: " + text::join(refs, ", ") + "\n";
    }
    for (const auto& f : rec.facts) {
      out += "  Facts: ";
      if (f.negated) out += "not ";
      out += ref(f.property) + " ";
      if (const auto* lit = std::get_if<Literal>(&f.object))
        out += detail::render_literal(*lit, ont.prefixes);
      else
        out += ref(std::get<std::string>(f.object));
      out += "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Triple view

inline rdf::TripleGraph to_triples(const Ontology& ont) {
  rdf::TripleGraph g;
  const auto type = rdf::Term::iri(rdf::vocab::type());
  const auto sub = rdf::Term::iri(rdf::vocab::sub_class_of());
  for (const auto& [cls, parents] : ont.classes)
    for (const auto& p : parents)
      g.insert({rdf::Term::iri(ont.iri(cls)), sub, rdf::Term::iri(ont.iri(p))});
  for (const auto& [name, rec] : ont.individuals) {
    auto subject = rdf::Term::iri(ont.iri(name));
    for (const auto& t : rec.types)
      g.insert({subject, type, rdf::Term::iri(ont.iri(t))});
    for (const auto& f : rec.facts) {
      if (f.negated) continue;
      rdf::Term object;
      if (const auto* lit = std::get_if<Literal>(&f.object))
        object = rdf::Term::literal(lit->value, lit->datatype);
      else
        object = rdf::Term::iri(ont.iri(std::get<std::string>(f.object)));
      g.insert({subject, rdf::Term::iri(ont.iri(f.property)), std::move(object)});
    }
  }
  return g;
}

}  // namespace ucat
