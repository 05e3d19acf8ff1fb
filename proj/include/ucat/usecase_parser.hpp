/**
 * @brief Use-case validation, multi-value expansion, entity and 4-tuple
 * extraction.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/rus_grammar.hpp"
#include "ucat/text.hpp"

namespace ucat {

enum class Role { UserInput, SystemResponse };

struct UseCaseLine {
  std::string text;
  Role role = Role::UserInput;
  std::size_t line_number = 0;

  bool operator==(const UseCaseLine&) const = default;
};

/// Reads the use-case file format: `U> stmt`, `S> stmt` or a bare statement
/// (user input), `#` comment lines, blank lines ignored.
inline std::vector<UseCaseLine> parse_use_case_file(std::string_view content) {
  std::vector<UseCaseLine> out;
  auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto body = text::trim(all[i]);
    if (body.empty() || body.front() == '#') continue;
    UseCaseLine line;
    line.line_number = i + 1;
    if (body.size() >= 2 && body[1] == '>' && (body[0] == 'U' || body[0] == 'S')) {
      line.role = body[0] == 'U' ? Role::UserInput : Role::SystemResponse;
      body = text::trim(body.substr(2));
    }
    if (body.empty()) continue;
    line.text = std::string(body);
    out.push_back(std::move(line));
  }
  return out;
}

struct Statement {
  RusRule rule;
  std::size_t rule_index = 0;
  Captures captures;
  UseCaseLine origin;

  bool operator==(const Statement&) const = default;
};

/// Renders the statement as the user would write it, e.g. `user inserts name`.
inline std::string render_statement(const Statement& s) {
  std::vector<std::string> parts;
  for (const auto& t : s.rule.pattern) {
    if (const auto* p = std::get_if<Placeholder>(&t)) {
      const auto& cap = s.captures.at(p->slot);
      if (const auto* one = std::get_if<std::string>(&cap)) {
        parts.push_back(*one);
      } else {
        const auto& list = std::get<std::vector<std::string>>(cap);
        parts.push_back(text::join(list, ", "));
      }
    } else if (const auto* k = std::get_if<Keyword>(&t)) {
      parts.push_back(k->surface);
    } else {
      parts.push_back(":");
    }
  }
  return text::join(parts, " ");
}

struct LineError {
  std::size_t line_number = 0;
  std::string text;
  std::vector<RuleFailure> failures;

  ErrorCode code() const { return ErrorCode::NoRuleMatches; }
};

struct ParsedUseCase {
  std::vector<Statement> statements;
  std::vector<LineError> errors;

  bool ok() const { return errors.empty(); }
};

inline ParsedUseCase parse_use_case(const std::vector<UseCaseLine>& lines,
                                    const StatementMatcher& matcher) {
  ParsedUseCase out;
  for (const auto& line : lines) {
    auto res = matcher.match(line.text);
    if (!res) {
      out.errors.push_back({line.line_number, line.text, std::move(res.failures)});
      continue;
    }
    const auto& m = *res.match;
    out.statements.push_back(
        {matcher.rus().rules[m.rule_index], m.rule_index, m.captures, line});
  }
  return out;
}

/// One statement per item of the `<I>+` capture, each bound to the single-value
/// analogue of the rule (multi marker cleared, list introducer dropped).
inline std::vector<Statement> expand_multi(const Statement& stmt) {
  if (!stmt.rule.has_multi()) return {stmt};

  RusRule single = stmt.rule;
  int multi_slot = 0;
  std::vector<PatternToken> pattern;
  for (auto t : single.pattern) {
    if (std::holds_alternative<ListIntro>(t)) continue;
    if (auto* p = std::get_if<Placeholder>(&t); p && p->multi) {
      p->multi = false;
      multi_slot = p->slot;
    }
    pattern.push_back(std::move(t));
  }
  single.pattern = std::move(pattern);

  auto it = stmt.captures.find(multi_slot);
  const auto* items = it == stmt.captures.end()
                          ? nullptr
                          : std::get_if<std::vector<std::string>>(&it->second);
  if (items == nullptr || items->empty())
    throw Error(ErrorCode::EmptyList, "multi placeholder captured no items",
                {stmt.origin.line_number, 0});

  std::vector<Statement> out;
  out.reserve(items->size());
  for (const auto& item : *items) {
    Statement s{single, stmt.rule_index, stmt.captures, stmt.origin};
    s.captures[multi_slot] = item;
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Statement> expand_all(const std::vector<Statement>& stmts) {
  std::vector<Statement> out;
  for (const auto& s : stmts) {
    auto part = expand_multi(s);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

/// Insertion-ordered set of tokens.
class OrderedSet {
 public:
  bool insert(const std::string& v) {
    if (!index_.insert(v).second) return false;
    items_.push_back(v);
    return true;
  }
  bool contains(const std::string& v) const { return index_.count(v) != 0; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<std::string>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::set<std::string> as_set() const { return {items_.begin(), items_.end()}; }

  bool operator==(const OrderedSet& o) const { return items_ == o.items_; }

 private:
  std::vector<std::string> items_;
  std::unordered_set<std::string> index_;
};

struct EntitySet {
  OrderedSet individuals;
  OrderedSet relations;
  OrderedSet data_properties;
  OrderedSet types;
  /// KindConflictWarning entries: a token captured under more than one kind.
  std::vector<Warning> warnings;

  OrderedSet& bucket(PlaceholderKind k) {
    switch (k) {
      case PlaceholderKind::Individual: return individuals;
      case PlaceholderKind::Relation: return relations;
      case PlaceholderKind::Data: return data_properties;
      case PlaceholderKind::Type: return types;
    }
    return individuals;
  }
  const OrderedSet& bucket(PlaceholderKind k) const {
    return const_cast<EntitySet*>(this)->bucket(k);
  }

  /// Order-insensitive comparison.
  bool same_sets(const EntitySet& o) const {
    return individuals.as_set() == o.individuals.as_set() &&
           relations.as_set() == o.relations.as_set() &&
           data_properties.as_set() == o.data_properties.as_set() &&
           types.as_set() == o.types.as_set();
  }
};

inline EntitySet extract_entities(const std::vector<Statement>& stmts) {
  EntitySet out;
  constexpr PlaceholderKind kinds[] = {
      PlaceholderKind::Individual, PlaceholderKind::Relation,
      PlaceholderKind::Type, PlaceholderKind::Data};
  std::set<std::string> conflicted;

  auto route = [&](PlaceholderKind kind, const std::string& tok,
                   std::size_t line) {
    if (!out.bucket(kind).insert(tok)) return;
    for (auto other : kinds) {
      if (other == kind || !out.bucket(other).contains(tok)) continue;
      if (conflicted.insert(tok).second)
        out.warnings.push_back(
            {"KindConflictWarning",
             "'" + tok + "' captured as both <" + tag_letter(other) +
                 "> and <" + tag_letter(kind) + ">",
             line});
    }
  };

  for (const auto& s : stmts) {
    for (const auto& p : s.rule.placeholders()) {
      auto it = s.captures.find(p.slot);
      if (it == s.captures.end()) continue;
      if (const auto* one = std::get_if<std::string>(&it->second)) {
        route(p.kind, *one, s.origin.line_number);
      } else {
        for (const auto& item : std::get<std::vector<std::string>>(it->second))
          route(p.kind, item, s.origin.line_number);
      }
    }
  }
  return out;
}

struct TupleStatement {
  std::string entity_kind;
  std::string entity;
  std::string property;
  std::string value;

  bool operator==(const TupleStatement&) const = default;

  std::string render() const {
    return entity_kind + "," + entity + "," + property + "," + value;
  }
};

namespace detail {
inline const std::string& single_capture(const Statement& s, int slot) {
  auto it = s.captures.find(slot);
  if (it == s.captures.end())
    throw Error(ErrorCode::SlotResolutionError,
                "statement has no capture for slot " + std::to_string(slot),
                {s.origin.line_number, 0});
  if (const auto* one = std::get_if<std::string>(&it->second)) return *one;
  throw Error(ErrorCode::EmptyList,
              "slot " + std::to_string(slot) +
                  " still holds a list; expand_multi must run first",
              {s.origin.line_number, 0});
}
}  // namespace detail

inline TupleStatement render_tuple(const Statement& s) {
  const auto& t = s.rule.target;
  TupleStatement out{t.entity_kind, detail::single_capture(s, t.entity_slot),
                     t.property_keyword, {}};
  for (const auto& part : t.value) {
    if (const auto* lit = std::get_if<std::string>(&part))
      out.value += *lit;
    else
      out.value += detail::single_capture(s, std::get<SlotRef>(part).slot);
  }
  return out;
}

inline std::vector<TupleStatement> extract_tuples(
    const std::vector<Statement>& stmts) {
  std::vector<TupleStatement> out;
  out.reserve(stmts.size());
  for (const auto& s : stmts) out.push_back(render_tuple(s));
  return out;
}

}  // namespace ucat
