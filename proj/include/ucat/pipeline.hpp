/**
 * @brief Glue shared by the CLI and the service: file loading, extraction in
 * one call, and the stable text renderings of pipeline artifacts.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/ontology.hpp"
#include "ucat/query.hpp"
#include "ucat/query_eval.hpp"
#include "ucat/rus_grammar.hpp"
#include "ucat/usecase_parser.hpp"

namespace ucat {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write file: " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

struct Extraction {
  std::vector<Statement> statements;  // after multi expansion
  EntitySet entities;
  std::vector<TupleStatement> tuples;
};

/// Expands, then extracts entities and tuples. Statements must be valid.
inline Extraction extract(const std::vector<Statement>& parsed) {
  Extraction out;
  out.statements = expand_all(parsed);
  out.entities = extract_entities(out.statements);
  out.tuples = extract_tuples(out.statements);
  return out;
}

/// `r:`, `i:`, `d:`, `t:` lines, each item followed by a comma.
inline std::string render_entities(const EntitySet& e) {
  std::string out;
  auto line = [&](const char* tag, const OrderedSet& set) {
    out += tag;
    for (const auto& item : set) out += item + ",";
    out += "\n";
  };
  line("r:", e.relations);
  line("i:", e.individuals);
  line("d:", e.data_properties);
  line("t:", e.types);
  return out;
}

inline std::string render_tuples(const std::vector<TupleStatement>& tuples) {
  std::string out;
  for (const auto& t : tuples) out += t.render() + "\n";
  return out;
}

/// Shortest readable form of a term: local name inside `ns`, `pfx:local` for a
/// known prefix, otherwise `<iri>` / the literal's N-Triples form.
inline std::string compact_term(const rdf::Term& t, const std::string& ns,
                                const std::map<std::string, std::string>& prefixes = {}) {
  if (t.is_literal()) {
    if (t.datatype == rdf::vocab::xsd_string()) return "\"" + t.value + "\"";
    return t.to_string();
  }
  if (!ns.empty() && t.value.size() > ns.size() && t.value.compare(0, ns.size(), ns) == 0)
    return t.value.substr(ns.size());
  for (const auto& [label, p] : prefixes)
    if (t.value.size() > p.size() && t.value.compare(0, p.size(), p) == 0)
      return label + ":" + t.value.substr(p.size());
  return "<" + t.value + ">";
}

/// Tab-separated table: header of `?var` names, then one row per binding.
inline std::string render_select(const std::vector<std::string>& vars,
                                 const std::vector<query::Binding>& rows,
                                 const std::string& ns) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? "\t?" : "?") + vars[i];
  out += "\n";
  const auto prefixes = rdf::vocab::standard_prefixes();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i) out += "\t";
      if (auto it = row.find(vars[i]); it != row.end())
        out += compact_term(it->second, ns, prefixes);
    }
    out += "\n";
  }
  return out;
}

}  // namespace ucat
