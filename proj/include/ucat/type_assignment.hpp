/**
 * @brief Class declarations and individual-to-class assignments (`.types`).
 *
 * Format, one item per line, `#` comments:
 *   class Actor
 *   class Text < Object[, Other]
 *   user: Actor
 *   name: Field, Text
 */
#pragma once

#include <cstddef>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/text.hpp"
#include "ucat/usecase_parser.hpp"

namespace ucat {

struct ClassDecl {
  std::string name;
  std::set<std::string> parents;

  bool operator==(const ClassDecl&) const = default;
};

struct TypeMap {
  std::map<std::string, std::set<std::string>> assignments;

  bool operator==(const TypeMap&) const = default;
  bool empty() const { return assignments.empty(); }
};

struct TypesFile {
  std::vector<ClassDecl> classes;
  TypeMap types;
  /// DuplicateAssignmentLine warnings.
  std::vector<Warning> warnings;
};

namespace detail {

inline bool is_type_name(std::string_view s) {
  return !s.empty() && s.find_first_of(" \t:,<>#") == std::string_view::npos;
}

/// Kahn's algorithm over child -> parent edges; throws SubclassCycle.
inline std::vector<std::string> topo_order(const std::vector<ClassDecl>& classes) {
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& c : classes) indegree.try_emplace(c.name, 0);
  for (const auto& c : classes)
    for (const auto& p : c.parents) {
      indegree.try_emplace(p, 0);
      ++indegree[c.name];
      children[p].push_back(c.name);
    }
  std::queue<std::string> ready;
  for (const auto& [name, deg] : indegree)
    if (deg == 0) ready.push(name);
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop();
    order.push_back(n);
    for (const auto& child : children[n])
      if (--indegree[child] == 0) ready.push(child);
  }
  if (order.size() != indegree.size()) {
    std::vector<std::string> stuck;
    for (const auto& [name, deg] : indegree)
      if (deg != 0) stuck.push_back(name);
    throw Error(ErrorCode::SubclassCycle,
                "subclass cycle among: " + text::join(stuck, ", "));
  }
  return order;
}

}  // namespace detail

/// Throws SubclassCycle when the declarations contain a cycle.
inline void check_acyclic(const std::vector<ClassDecl>& classes) {
  detail::topo_order(classes);
}

inline TypesFile parse_types(std::string_view content) {
  TypesFile out;
  std::map<std::string, std::size_t> class_index;
  std::map<std::string, std::size_t> parent_line;
  std::map<std::string, std::size_t> assigned_line;
  std::vector<std::pair<std::string, std::size_t>> class_refs;

  auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t ln = i + 1;
    auto body = text::trim(all[i]);
    if (body.empty() || body.front() == '#') continue;

    if (body.substr(0, 6) == "class " || body.substr(0, 6) == "class\t") {
      auto decl = text::trim(body.substr(6));
      std::string name;
      std::vector<std::string> parents;
      if (auto lt = decl.find('<'); lt != std::string_view::npos) {
        name = std::string(text::trim(decl.substr(0, lt)));
        parents = text::split_trim(decl.substr(lt + 1), ',');
      } else {
        name = std::string(decl);
      }
      if (!detail::is_type_name(name))
        throw Error(ErrorCode::MalformedTypes, "invalid class name '" + name + "'",
                    {ln, 0});
      auto [it, fresh] = class_index.try_emplace(name, out.classes.size());
      if (fresh) out.classes.push_back({name, {}});
      for (const auto& p : parents) {
        if (!detail::is_type_name(p))
          throw Error(ErrorCode::MalformedTypes,
                      "invalid parent class '" + p + "'", {ln, 0});
        out.classes[it->second].parents.insert(p);
      }
      // A parent named in a class line is declared by that mention.
      for (const auto& p : parents)
        if (class_index.try_emplace(p, out.classes.size()).second)
          out.classes.push_back({p, {}});
      continue;
    }

    auto colon = body.find(':');
    if (colon == std::string_view::npos)
      throw Error(ErrorCode::MalformedTypes,
                  "expected 'class <Name>' or '<individual>: <Class>, ...'",
                  {ln, 0});
    std::string individual(text::trim(body.substr(0, colon)));
    if (!detail::is_type_name(individual))
      throw Error(ErrorCode::MalformedTypes,
                  "invalid individual name '" + individual + "'", {ln, 0});
    auto classes = text::split_trim(body.substr(colon + 1), ',');
    if (classes.size() == 1 && classes[0].empty())
      throw Error(ErrorCode::MalformedTypes,
                  "'" + individual + "' is assigned no class", {ln, 0});
    auto [prev, first] = assigned_line.try_emplace(individual, ln);
    if (!first)
      out.warnings.push_back(
          {"DuplicateAssignmentLine",
           "'" + individual + "' already assigned on line " +
               std::to_string(prev->second) + "; assignments merged",
           ln});
    auto& set = out.types.assignments[individual];
    for (const auto& c : classes) {
      if (!detail::is_type_name(c))
        throw Error(ErrorCode::MalformedTypes, "invalid class name '" + c + "'",
                    {ln, 0});
      set.insert(c);
      class_refs.emplace_back(c, ln);
    }
  }

  for (const auto& [name, ln] : class_refs)
    if (!class_index.count(name))
      throw Error(ErrorCode::UndeclaredClass,
                  "class '" + name + "' is used but never declared", {ln, 0});
  check_acyclic(out.classes);
  return out;
}

/// Renders declarations and assignments back into the `.types` format.
inline std::string render_types(const std::vector<ClassDecl>& classes,
                                const TypeMap& types) {
  std::string out;
  for (const auto& c : classes) {
    out += "class " + c.name;
    if (!c.parents.empty())
      out += " < " + text::join({c.parents.begin(), c.parents.end()}, ", ");
    out += "\n";
  }
  for (const auto& [ind, cls] : types.assignments)
    out += ind + ": " + text::join({cls.begin(), cls.end()}, ", ") + "\n";
  return out;
}

struct ValidationReport {
  /// Individuals from the use case with no class, in extraction order.
  std::vector<std::string> untyped;
  /// UnknownIndividual warnings: assignments for tokens the use case lacks.
  std::vector<std::string> unknown_individuals;

  bool ok() const { return untyped.empty(); }
};

inline ValidationReport validate_assignment(const EntitySet& entities,
                                            const TypeMap& types) {
  ValidationReport r;
  for (const auto& ind : entities.individuals) {
    auto it = types.assignments.find(ind);
    if (it == types.assignments.end() || it->second.empty()) r.untyped.push_back(ind);
  }
  for (const auto& [ind, _] : types.assignments)
    if (!entities.individuals.contains(ind)) r.unknown_individuals.push_back(ind);
  return r;
}

}  // namespace ucat
