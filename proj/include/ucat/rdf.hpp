/**
 * @brief Ground RDF terms, triples and an immutable-by-convention triple set.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace ucat::rdf {

namespace vocab {
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";

inline std::string type() { return std::string(rdf) + "type"; }
inline std::string sub_class_of() { return std::string(rdfs) + "subClassOf"; }
inline std::string xsd_string() { return std::string(xsd) + "string"; }

/// owl, rdf, rdfs, xsd.
inline std::map<std::string, std::string> standard_prefixes() {
  return {{"owl", std::string(owl)},
          {"rdf", std::string(rdf)},
          {"rdfs", std::string(rdfs)},
          {"xsd", std::string(xsd)}};
}
}  // namespace vocab

/// An IRI or a typed literal.
struct Term {
  enum class Kind { Iri, Literal };

  Kind kind = Kind::Iri;
  std::string value;
  /// Datatype IRI for literals; empty for IRIs.
  std::string datatype;

  static Term iri(std::string v) { return {Kind::Iri, std::move(v), {}}; }
  static Term literal(std::string v, std::string dt = vocab::xsd_string()) {
    return {Kind::Literal, std::move(v), std::move(dt)};
  }

  bool is_iri() const { return kind == Kind::Iri; }
  bool is_literal() const { return kind == Kind::Literal; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

  /// N-Triples style: `<iri>` or `"v"^^<dt>`.
  std::string to_string() const {
    if (is_iri()) return "<" + value + ">";
    std::string out = "\"";
    for (char c : value) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out + "\"^^<" + datatype + ">";
  }
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

/// Set of triples; ordered so iteration is deterministic.
class TripleGraph {
 public:
  TripleGraph() = default;
  TripleGraph(std::initializer_list<Triple> ts) : triples_(ts) {}

  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  bool erase(const Triple& t) { return triples_.erase(t) != 0; }
  bool contains(const Triple& t) const { return triples_.count(t) != 0; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }
  const std::set<Triple>& triples() const { return triples_; }

  /// Every distinct term in subject, predicate or object position.
  std::set<Term> terms() const {
    std::set<Term> out;
    for (const auto& t : triples_) {
      out.insert(t.subject);
      out.insert(t.predicate);
      out.insert(t.object);
    }
    return out;
  }

  bool operator==(const TripleGraph&) const = default;

 private:
  std::set<Triple> triples_;
};

}  // namespace ucat::rdf
