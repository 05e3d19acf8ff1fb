/**
 * @brief Reference evaluator: enumerates every assignment of query variables
 * to graph terms. Exponential; used as a test oracle for query_eval.
 *
 * Shares no code with the backtracking evaluator, including the subclass
 * closure, which is computed here by naive fixpoint iteration.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/query.hpp"
#include "ucat/rdf.hpp"

namespace ucat::query {

struct OracleLimits {
  std::size_t max_triples = 1000;
  std::size_t max_variables = 6;
  /// Upper bound on domain^variables for any single enumeration.
  double max_assignments = 5e7;
};

namespace detail {

class BruteForce {
 public:
  BruteForce(const Query& q, const rdf::TripleGraph& g, const OracleLimits& lim)
      : q_(q), lim_(lim) {
    if (g.size() > lim.max_triples)
      throw Error(ErrorCode::OracleTooLarge,
                  "graph has " + std::to_string(g.size()) + " triples");

    for (const auto& t : g.terms()) {
      id_[t] = static_cast<int>(domain_.size());
      domain_.push_back(t);
    }

    // Naive fixpoint for (x type C), (C subClassOf D) => (x type D).
    const auto type = rdf::Term::iri(rdf::vocab::type());
    const auto sub = rdf::Term::iri(rdf::vocab::sub_class_of());
    std::set<rdf::Triple> closed(g.begin(), g.end());
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<rdf::Triple> add;
      for (const auto& a : closed) {
        if (a.predicate != type) continue;
        for (const auto& c : closed)
          if (c.predicate == sub && c.subject == a.object &&
              !closed.count({a.subject, type, c.object}))
            add.push_back({a.subject, type, c.object});
      }
      for (auto& t : add) changed |= closed.insert(std::move(t)).second;
    }
    for (const auto& t : closed)
      facts_.insert({id_.at(t.subject), id_.at(t.predicate), id_.at(t.object)});

    std::set<std::string> all;
    collect_vars(q.body, all);
    if (all.size() > lim.max_variables)
      throw Error(ErrorCode::OracleTooLarge,
                  "query has " + std::to_string(all.size()) + " variables");
  }

  std::vector<Binding> run() {
    auto outer = pattern_variables(q_.body);
    std::vector<std::string> report = result_variables(q_);
    std::set<Binding> results;
    std::map<std::string, int> asg;
    enumerate(q_.body, outer, 0, asg, [&] {
      if (!group_holds(q_.body, asg)) return false;
      Binding b;
      for (const auto& v : report)
        if (auto it = asg.find(v); it != asg.end()) b.emplace(v, domain_[it->second]);
      results.insert(std::move(b));
      return false;
    });
    return {results.begin(), results.end()};
  }

 private:
  static void collect_vars(const GroupPattern& g, std::set<std::string>& out) {
    for (const auto& v : pattern_variables(g)) out.insert(v);
    for (const auto& inner : g.not_exists) collect_vars(inner, out);
  }

  void check_budget(std::size_t vars) const {
    double n = std::pow(static_cast<double>(std::max<std::size_t>(domain_.size(), 1)),
                        static_cast<double>(vars));
    if (n > lim_.max_assignments)
      throw Error(ErrorCode::OracleTooLarge,
                  std::to_string(domain_.size()) + "^" + std::to_string(vars) +
                      " assignments exceed the oracle bound");
  }

  /// Nested loops over `vars`; `leaf` returns true to stop. Returns true if
  /// stopped. Branches where an already fully assigned pattern of `g` fails
  /// are cut early.
  template <typename Leaf>
  bool enumerate(const GroupPattern& g, const std::vector<std::string>& vars,
                 std::size_t depth, std::map<std::string, int>& asg, Leaf&& leaf) {
    if (depth == 0) check_budget(vars.size());
    if (depth == vars.size()) return leaf();
    for (int id = 0; id < static_cast<int>(domain_.size()); ++id) {
      asg[vars[depth]] = id;
      if (!assigned_patterns_hold(g, asg)) continue;
      if (enumerate(g, vars, depth + 1, asg, leaf)) {
        asg.erase(vars[depth]);
        return true;
      }
    }
    asg.erase(vars[depth]);
    return false;
  }

  bool assigned_patterns_hold(const GroupPattern& g,
                              const std::map<std::string, int>& asg) const {
    auto known = [&](const PatternTerm& t) {
      const auto* v = std::get_if<Variable>(&t);
      return !v || asg.count(v->name);
    };
    for (const auto& p : g.patterns) {
      if (!known(p.subject) || !known(p.predicate) || !known(p.object)) continue;
      std::array<int, 3> r{resolve(p.subject, asg), resolve(p.predicate, asg),
                           resolve(p.object, asg)};
      if (r[0] < 0 || r[1] < 0 || r[2] < 0 || !facts_.count(r)) return false;
    }
    return true;
  }

  int resolve(const PatternTerm& t, const std::map<std::string, int>& asg) const {
    if (const auto* v = std::get_if<Variable>(&t)) return asg.at(v->name);
    auto it = id_.find(std::get<rdf::Term>(t));
    return it == id_.end() ? -1 : it->second;
  }

  /// All patterns of `g` hold under the complete assignment and no NOT EXISTS
  /// group is satisfiable from it.
  bool group_holds(const GroupPattern& g, std::map<std::string, int>& asg) {
    for (const auto& p : g.patterns) {
      std::array<int, 3> r{resolve(p.subject, asg), resolve(p.predicate, asg),
                           resolve(p.object, asg)};
      if (r[0] < 0 || r[1] < 0 || r[2] < 0 || !facts_.count(r)) return false;
    }
    for (const auto& inner : g.not_exists)
      if (satisfiable(inner, asg)) return false;
    return true;
  }

  bool satisfiable(const GroupPattern& g, std::map<std::string, int>& asg) {
    std::vector<std::string> free;
    for (const auto& v : pattern_variables(g))
      if (!asg.count(v)) free.push_back(v);
    return enumerate(g, free, 0, asg, [&] { return group_holds(g, asg); });
  }

  const Query& q_;
  OracleLimits lim_;
  std::vector<rdf::Term> domain_;
  std::map<rdf::Term, int> id_;
  std::set<std::array<int, 3>> facts_;
};

}  // namespace detail

/// Every binding of the outer variables (projected as eval_select projects)
/// obtained by exhaustive enumeration. Throws OracleTooLarge past the limits.
inline std::vector<Binding> brute_force_eval(const Query& q, const rdf::TripleGraph& g,
                                             const OracleLimits& limits = {}) {
  return detail::BruteForce(q, g, limits).run();
}

}  // namespace ucat::query
