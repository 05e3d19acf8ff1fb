/**
 * @brief Backtracking evaluator for the SPARQL subset over a TripleGraph.
 *
 * rdf:type patterns see the transitive rdfs:subClassOf closure of the graph;
 * every other predicate matches asserted triples only. FILTER NOT EXISTS is
 * correlated: the inner group is evaluated under the outer binding, and its
 * remaining variables are existential.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ucat/query.hpp"
#include "ucat/rdf.hpp"

namespace ucat::query {

using Binding = std::map<std::string, rdf::Term>;

/// Adds (x rdf:type D) for every (x rdf:type C) with C ⊑* D.
inline rdf::TripleGraph type_closure(const rdf::TripleGraph& g) {
  const auto type = rdf::Term::iri(rdf::vocab::type());
  const auto sub = rdf::Term::iri(rdf::vocab::sub_class_of());

  std::map<rdf::Term, std::vector<rdf::Term>> parents;
  for (const auto& t : g)
    if (t.predicate == sub) parents[t.subject].push_back(t.object);

  std::map<rdf::Term, std::set<rdf::Term>> memo;
  auto ancestors = [&](const rdf::Term& c) -> const std::set<rdf::Term>& {
    auto [it, fresh] = memo.try_emplace(c);
    if (!fresh) return it->second;
    std::vector<rdf::Term> stack{c};
    std::set<rdf::Term> seen{c};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      auto p = parents.find(cur);
      if (p == parents.end()) continue;
      for (const auto& d : p->second)
        if (seen.insert(d).second) stack.push_back(d);
    }
    it->second = std::move(seen);
    return it->second;
  };

  rdf::TripleGraph out = g;
  for (const auto& t : g) {
    if (t.predicate != type) continue;
    for (const auto& d : ancestors(t.object)) out.insert({t.subject, type, d});
  }
  return out;
}

/// Evaluates queries against one graph. Build once, query many times; all
/// query methods are const and safe to call concurrently.
class Evaluator {
 public:
  explicit Evaluator(const rdf::TripleGraph& graph) {
    auto closed = type_closure(graph);
    for (const auto& t : closed) {
      Row r{intern(t.subject), intern(t.predicate), intern(t.object)};
      const int idx = static_cast<int>(rows_.size());
      rows_.push_back(r);
      for (int k = 0; k < 3; ++k) index_[k][r[k]].push_back(idx);
      row_set_.insert(r);
    }
  }

  std::vector<Binding> select(const Query& q) const {
    Compiled c = compile(q);
    std::vector<std::string> vars = result_variables(q);
    std::vector<int> proj;
    for (const auto& v : vars) {
      auto it = c.slots.find(v);
      proj.push_back(it == c.slots.end() ? -1 : it->second);
    }

    std::set<std::vector<int>> distinct;
    std::vector<int> b(c.slots.size(), kUnbound);
    solve(c.body, b, [&](const std::vector<int>& sol) {
      std::vector<int> row;
      row.reserve(proj.size());
      for (int s : proj) row.push_back(s < 0 ? kUnbound : sol[s]);
      distinct.insert(std::move(row));
      return true;
    });

    std::vector<std::pair<std::vector<std::string>, Binding>> keyed;
    for (const auto& row : distinct) {
      Binding bnd;
      std::vector<std::string> key;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == kUnbound) {
          key.emplace_back();
          continue;
        }
        key.push_back(terms_[row[i]].value);
        bnd.emplace(vars[i], terms_[row[i]]);
      }
      keyed.emplace_back(std::move(key), std::move(bnd));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    std::vector<Binding> out;
    out.reserve(keyed.size());
    for (auto& [_, bnd] : keyed) out.push_back(std::move(bnd));
    return out;
  }

  bool ask(const Query& q) const {
    Compiled c = compile(q);
    std::vector<int> b(c.slots.size(), kUnbound);
    bool found = false;
    solve(c.body, b, [&](const std::vector<int>&) {
      found = true;
      return false;
    });
    return found;
  }

 private:
  using Row = std::array<int, 3>;
  static constexpr int kUnbound = -1;
  static constexpr int kAbsent = -2;  // constant that occurs nowhere in the graph

  struct Slot {
    bool is_var = false;
    int id = kAbsent;  // variable slot or term id
  };
  struct CPattern {
    std::array<Slot, 3> at;
  };
  struct CGroup {
    std::vector<CPattern> patterns;
    std::vector<CGroup> not_exists;
  };
  struct Compiled {
    std::map<std::string, int> slots;
    CGroup body;
  };

  int intern(const rdf::Term& t) {
    auto [it, fresh] = ids_.try_emplace(t, static_cast<int>(terms_.size()));
    if (fresh) terms_.push_back(t);
    return it->second;
  }

  Compiled compile(const Query& q) const {
    Compiled c;
    std::function<CGroup(const GroupPattern&)> group = [&](const GroupPattern& g) {
      CGroup out;
      for (const auto& p : g.patterns) {
        CPattern cp;
        const PatternTerm* pts[3] = {&p.subject, &p.predicate, &p.object};
        for (int k = 0; k < 3; ++k) {
          if (const auto* v = std::get_if<Variable>(pts[k])) {
            auto [it, _] = c.slots.try_emplace(v->name, static_cast<int>(c.slots.size()));
            cp.at[k] = {true, it->second};
          } else {
            auto it = ids_.find(std::get<rdf::Term>(*pts[k]));
            cp.at[k] = {false, it == ids_.end() ? kAbsent : it->second};
          }
        }
        out.patterns.push_back(cp);
      }
      for (const auto& inner : g.not_exists) out.not_exists.push_back(group(inner));
      return out;
    };
    c.body = group(q.body);
    return c;
  }

  static int value_at(const Slot& s, const std::vector<int>& b) {
    return s.is_var ? b[s.id] : s.id;
  }

  /// Enumerates solutions of `g` extending `b`; `emit` returns false to stop.
  /// Returns false when stopped early.
  template <typename Emit>
  bool solve(const CGroup& g, std::vector<int>& b, Emit&& emit) const {
    std::vector<char> done(g.patterns.size(), 0);
    return step(g, done, g.patterns.size(), b, emit);
  }

  template <typename Emit>
  bool step(const CGroup& g, std::vector<char>& done, std::size_t left,
            std::vector<int>& b, Emit& emit) const {
    if (left == 0) {
      for (const auto& inner : g.not_exists)
        if (exists(inner, b)) return true;
      return emit(static_cast<const std::vector<int>&>(b));
    }

    // Most-constrained pattern first.
    std::size_t pick = g.patterns.size();
    int best_bound = -1;
    for (std::size_t i = 0; i < g.patterns.size(); ++i) {
      if (done[i]) continue;
      int bound = 0;
      for (const auto& s : g.patterns[i].at) bound += value_at(s, b) != kUnbound;
      if (bound > best_bound) {
        best_bound = bound;
        pick = i;
      }
    }
    const CPattern& p = g.patterns[pick];
    std::array<int, 3> want{};
    for (int k = 0; k < 3; ++k) {
      want[k] = value_at(p.at[k], b);
      if (want[k] == kAbsent) return true;
    }

    done[pick] = 1;
    bool keep_going = true;
    auto try_row = [&](const Row& r) {
      std::array<int, 3> newly{-1, -1, -1};
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        if (want[k] != kUnbound) {
          ok = r[k] == want[k];
        } else if (b[p.at[k].id] == kUnbound) {
          b[p.at[k].id] = r[k];
          newly[k] = p.at[k].id;
        } else {
          ok = b[p.at[k].id] == r[k];  // same variable twice in the pattern
        }
      }
      if (ok) keep_going = step(g, done, left - 1, b, emit);
      for (int s : newly)
        if (s >= 0) b[s] = kUnbound;
    };

    if (best_bound == 3) {
      if (row_set_.count(want)) try_row(want);
    } else {
      const std::vector<int>* cands = nullptr;
      for (int k = 0; k < 3; ++k) {
        if (want[k] == kUnbound) continue;
        auto it = index_[k].find(want[k]);
        static const std::vector<int> none;
        const auto* list = it == index_[k].end() ? &none : &it->second;
        if (!cands || list->size() < cands->size()) cands = list;
      }
      if (cands) {
        for (int idx : *cands) {
          try_row(rows_[idx]);
          if (!keep_going) break;
        }
      } else {
        for (const auto& r : rows_) {
          try_row(r);
          if (!keep_going) break;
        }
      }
    }
    done[pick] = 0;
    return keep_going;
  }

  bool exists(const CGroup& g, std::vector<int>& b) const {
    bool found = false;
    solve(g, b, [&](const std::vector<int>&) {
      found = true;
      return false;
    });
    return found;
  }

  std::vector<rdf::Term> terms_;
  std::map<rdf::Term, int> ids_;
  std::vector<Row> rows_;
  std::array<std::map<int, std::vector<int>>, 3> index_;
  std::set<Row> row_set_;
};

/// Distinct projected bindings, sorted lexicographically by bound values.
inline std::vector<Binding> eval_select(const Query& q, const rdf::TripleGraph& g) {
  return Evaluator(g).select(q);
}

inline bool eval_ask(const Query& q, const rdf::TripleGraph& g) {
  return Evaluator(g).ask(q);
}

}  // namespace ucat::query
