/**
 * @brief RUS template grammar: parsing of `.rus` files and the compiled
 * statement matcher.
 *
 * A rule has the shape `<pattern> -> <kind>,<entity>,<property>,<value>`.
 * Pattern tokens are placeholders (`<I>`, `<R>`, `<T>`, `<D>`, `<I>+`),
 * keywords (`_has` or a bare word) and the list introducer `:`.
 */
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/text.hpp"

namespace ucat {

enum class PlaceholderKind { Individual, Relation, Type, Data };

inline char tag_letter(PlaceholderKind k) {
  switch (k) {
    case PlaceholderKind::Individual: return 'I';
    case PlaceholderKind::Relation: return 'R';
    case PlaceholderKind::Type: return 'T';
    case PlaceholderKind::Data: return 'D';
  }
  return '?';
}

inline std::optional<PlaceholderKind> kind_from_letter(char c) {
  switch (c) {
    case 'I': return PlaceholderKind::Individual;
    case 'R': return PlaceholderKind::Relation;
    case 'T': return PlaceholderKind::Type;
    case 'D': return PlaceholderKind::Data;
    default: return std::nullopt;
  }
}

struct Placeholder {
  PlaceholderKind kind;
  bool multi = false;
  /// 1-based ordinal among the rule's placeholders.
  int slot = 0;

  bool operator==(const Placeholder&) const = default;
};

struct Keyword {
  std::string surface;

  bool operator==(const Keyword&) const = default;
};

struct ListIntro {
  bool operator==(const ListIntro&) const = default;
};

using PatternToken = std::variant<Placeholder, Keyword, ListIntro>;

struct SlotRef {
  int slot = 0;

  bool operator==(const SlotRef&) const = default;
};

/// Literal text or a slot reference.
using ValuePart = std::variant<std::string, SlotRef>;

struct TupleTemplate {
  std::string entity_kind;
  int entity_slot = 0;
  std::string property_keyword;
  std::vector<ValuePart> value;

  bool operator==(const TupleTemplate&) const = default;
};

struct RusRule {
  std::vector<PatternToken> pattern;
  TupleTemplate target;
  std::size_t source_line = 0;

  bool operator==(const RusRule&) const = default;

  std::vector<Placeholder> placeholders() const {
    std::vector<Placeholder> out;
    for (const auto& t : pattern)
      if (const auto* p = std::get_if<Placeholder>(&t)) out.push_back(*p);
    return out;
  }

  std::optional<Placeholder> placeholder(int slot) const {
    for (const auto& t : pattern)
      if (const auto* p = std::get_if<Placeholder>(&t); p && p->slot == slot)
        return *p;
    return std::nullopt;
  }

  bool has_multi() const {
    for (const auto& t : pattern)
      if (const auto* p = std::get_if<Placeholder>(&t); p && p->multi) return true;
    return false;
  }
};

struct RusFile {
  std::vector<RusRule> rules;

  bool operator==(const RusFile&) const = default;
};

/// Pattern text of a rule, e.g. `<I> <R> : <I>+`.
inline std::string render_pattern(const RusRule& rule) {
  std::vector<std::string> parts;
  for (const auto& t : rule.pattern) {
    if (const auto* p = std::get_if<Placeholder>(&t)) {
      parts.push_back(std::string("<") + tag_letter(p->kind) + ">" +
                      (p->multi ? "+" : ""));
    } else if (const auto* k = std::get_if<Keyword>(&t)) {
      parts.push_back(k->surface);
    } else {
      parts.push_back(":");
    }
  }
  return text::join(parts, " ");
}

namespace detail {

inline bool is_punct_token(std::string_view t) { return t == ":" || t == ","; }

/// `//` opens a comment at line start or after whitespace, so IRIs such as
/// `http://x` inside a target survive.
inline std::string_view strip_rus_comment(std::string_view line) {
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (line[i] == '/' && line[i + 1] == '/' &&
        (i == 0 || text::is_space(line[i - 1])))
      return line.substr(0, i);
  }
  return line;
}

/// Whitespace split with `:` and `,` emitted as standalone tokens.
inline std::vector<std::string> tokenize_with_punct(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : s) {
    if (text::is_space(c)) {
      flush();
    } else if (c == ':' || c == ',') {
      flush();
      out.emplace_back(1, c);
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

/// Placeholder written as `<X>` or `<X>+` where X is a single character.
struct TagSyntax {
  char letter;
  bool multi;
};

inline std::optional<TagSyntax> read_tag(std::string_view s, std::size_t at,
                                         std::size_t* length) {
  if (at + 2 >= s.size() || s[at] != '<' || s[at + 2] != '>') return std::nullopt;
  char letter = s[at + 1];
  if (text::is_space(letter) || letter == '<' || letter == '>') return std::nullopt;
  bool multi = at + 3 < s.size() && s[at + 3] == '+';
  *length = multi ? 4 : 3;
  return TagSyntax{letter, multi};
}

inline std::vector<PatternToken> parse_pattern(std::string_view text,
                                               std::size_t line) {
  std::vector<PatternToken> tokens;
  int slot = 0;
  for (const auto& tok : tokenize_with_punct(text)) {
    if (tok == ":") {
      tokens.emplace_back(ListIntro{});
      continue;
    }
    if (tok == ",")
      throw Error(ErrorCode::InvalidPattern, "unexpected ',' in pattern",
                  {line, 0});
    if (tok.front() == '<') {
      std::size_t len = 0;
      auto tag = read_tag(tok, 0, &len);
      if (!tag || len != tok.size())
        throw Error(ErrorCode::UnknownTag, "malformed placeholder '" + tok + "'",
                    {line, 0});
      auto kind = kind_from_letter(tag->letter);
      if (!kind)
        throw Error(ErrorCode::UnknownTag,
                    "unknown placeholder '" + tok + "' (expected I, R, T or D)",
                    {line, 0});
      if (tag->multi && *kind != PlaceholderKind::Individual)
        throw Error(ErrorCode::InvalidPattern,
                    "only <I> accepts the '+' multi marker, got '" + tok + "'",
                    {line, 0});
      tokens.emplace_back(Placeholder{*kind, tag->multi, ++slot});
      continue;
    }
    std::string word = tok.front() == '_' ? tok.substr(1) : tok;
    if (word.empty() || word.find_first_of("<>") != std::string::npos)
      throw Error(ErrorCode::InvalidPattern, "invalid keyword '" + tok + "'",
                  {line, 0});
    tokens.emplace_back(Keyword{std::move(word)});
  }

  if (slot < 2 || slot > 3)
    throw Error(ErrorCode::InvalidPattern,
                "a pattern needs two or three placeholders, found " +
                    std::to_string(slot),
                {line, 0});
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto* p = std::get_if<Placeholder>(&tokens[i]);
    if (p && p->multi && i + 1 != tokens.size())
      throw Error(ErrorCode::MultiNotLast,
                  "the multi placeholder <I>+ must be the last pattern token",
                  {line, 0});
  }
  return tokens;
}

/// Resolves `<X>` occurrences in the target against the pattern: the n-th
/// occurrence of kind X (counted over the whole target) binds to the n-th
/// placeholder of kind X.
class SlotResolver {
 public:
  SlotResolver(const std::vector<PatternToken>& pattern, std::size_t line)
      : line_(line) {
    for (const auto& t : pattern)
      if (const auto* p = std::get_if<Placeholder>(&t))
        by_kind_[p->kind].push_back(*p);
  }

  int resolve(const TagSyntax& tag) {
    auto kind = kind_from_letter(tag.letter);
    if (!kind)
      throw Error(ErrorCode::UnknownTag,
                  std::string("unknown placeholder '<") + tag.letter +
                      ">' in target",
                  {line_, 0});
    std::size_t n = seen_[*kind]++;
    const auto& candidates = by_kind_[*kind];
    if (n >= candidates.size())
      throw Error(ErrorCode::SlotResolutionError,
                  std::string("target references <") + tag.letter +
                      "> occurrence " + std::to_string(n + 1) +
                      " which the pattern does not declare",
                  {line_, 0});
    const Placeholder& p = candidates[n];
    if (tag.multi != p.multi)
      throw Error(ErrorCode::SlotResolutionError,
                  std::string("target <") + tag.letter + ">" +
                      (tag.multi ? "+" : "") +
                      " disagrees with the pattern's multi marker",
                  {line_, 0});
    return p.slot;
  }

 private:
  std::size_t line_;
  std::map<PlaceholderKind, std::vector<Placeholder>> by_kind_;
  std::map<PlaceholderKind, std::size_t> seen_;
};

inline std::vector<ValuePart> parse_value(std::string_view s,
                                          SlotResolver& resolver) {
  std::vector<ValuePart> parts;
  std::string literal;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = 0;
    auto tag = read_tag(s, i, &len);
    // Single-character `<X>` is a placeholder; longer `<...>` (an IRI) is text.
    if (tag) {
      if (!literal.empty()) parts.emplace_back(std::move(literal));
      literal.clear();
      parts.emplace_back(SlotRef{resolver.resolve(*tag)});
      i += len;
    } else {
      literal.push_back(s[i++]);
    }
  }
  if (!literal.empty()) parts.emplace_back(std::move(literal));
  return parts;
}

inline TupleTemplate parse_target(std::string_view text,
                                  const std::vector<PatternToken>& pattern,
                                  std::size_t line) {
  std::vector<std::string_view> comps;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos)
      throw Error(ErrorCode::TupleArityError,
                  "target must have 4 comma-separated components, found " +
                      std::to_string(comps.size() + 1),
                  {line, 0});
    comps.push_back(text::trim(text.substr(start, comma - start)));
    start = comma + 1;
  }
  comps.push_back(text::trim(text.substr(start)));

  for (std::size_t i : {0u, 2u})
    if (comps[i].empty() || text::split_ws(comps[i]).size() != 1)
      throw Error(ErrorCode::TupleArityError,
                  "target component " + std::to_string(i + 1) +
                      " must be a single word",
                  {line, 0});
  if (comps[3].empty())
    throw Error(ErrorCode::TupleArityError, "target value component is empty",
                {line, 0});

  SlotResolver resolver(pattern, line);
  TupleTemplate t;
  t.entity_kind = std::string(comps[0]);
  std::size_t len = 0;
  auto tag = read_tag(comps[1], 0, &len);
  if (!tag || len != comps[1].size())
    throw Error(ErrorCode::SlotResolutionError,
                "target entity must be a single placeholder, got '" +
                    std::string(comps[1]) + "'",
                {line, 0});
  t.entity_slot = resolver.resolve(*tag);
  t.property_keyword = std::string(comps[2]);
  t.value = parse_value(comps[3], resolver);
  return t;
}

inline RusRule parse_rule(std::string_view body, std::size_t line) {
  std::size_t arrow = body.find("->");
  if (arrow == std::string_view::npos)
    throw Error(ErrorCode::MissingArrow, "rule has no '->' separator", {line, 0});
  RusRule rule;
  rule.source_line = line;
  rule.pattern = parse_pattern(body.substr(0, arrow), line);
  rule.target = parse_target(text::trim(body.substr(arrow + 2)), rule.pattern, line);
  return rule;
}

}  // namespace detail

/// Parses a `.rus` document. Throws ucat::Error on the first malformed rule.
inline RusFile parse_rus(std::string_view text) {
  RusFile file;
  auto all = text::lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto body = text::trim(detail::strip_rus_comment(all[i]));
    if (body.empty()) continue;
    file.rules.push_back(detail::parse_rule(body, i + 1));
  }
  if (file.rules.empty())
    throw Error(ErrorCode::InvalidPattern, "RUS file contains no rules");
  return file;
}

/// Checks every line independently and returns all errors (empty when valid).
inline std::vector<Error> check_rus(std::string_view text) {
  std::vector<Error> errors;
  auto all = text::lines(text);
  std::size_t rules = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto body = text::trim(detail::strip_rus_comment(all[i]));
    if (body.empty()) continue;
    try {
      detail::parse_rule(body, i + 1);
      ++rules;
    } catch (const Error& e) {
      errors.push_back(e);
    }
  }
  if (rules == 0 && errors.empty())
    errors.emplace_back(ErrorCode::InvalidPattern, "RUS file contains no rules");
  return errors;
}

// ---------------------------------------------------------------------------
// Matcher

/// A placeholder capture: one token, or a list for `<I>+`.
using Capture = std::variant<std::string, std::vector<std::string>>;
using Captures = std::map<int, Capture>;

struct RuleMatch {
  std::size_t rule_index = 0;
  Captures captures;
};

struct RuleFailure {
  std::size_t rule_index = 0;
  std::string reason;
};

struct MatchResult {
  std::optional<RuleMatch> match;
  /// Why each rule tried before the winner (or every rule, on failure) rejected.
  std::vector<RuleFailure> failures;

  explicit operator bool() const { return match.has_value(); }
};

/// Splits a statement into tokens: whitespace separated, `:` and `,` standalone.
inline std::vector<std::string> tokenize_statement(std::string_view line) {
  return detail::tokenize_with_punct(line);
}

/// Validates and captures use-case statements; rules are tried in file order
/// and the first match wins. Immutable once built.
class StatementMatcher {
 public:
  explicit StatementMatcher(RusFile rus) : rus_(std::move(rus)) {}

  const RusFile& rus() const noexcept { return rus_; }

  MatchResult match(std::string_view line) const {
    auto tokens = tokenize_statement(line);
    MatchResult result;
    for (std::size_t r = 0; r < rus_.rules.size(); ++r) {
      Captures caps;
      if (auto why = match_rule(rus_.rules[r], tokens, caps)) {
        result.failures.push_back({r, std::move(*why)});
        continue;
      }
      result.match = RuleMatch{r, std::move(caps)};
      break;
    }
    return result;
  }

  /// Attempts a single rule; returns the rejection reason or nullopt on success.
  static std::optional<std::string> match_rule(
      const RusRule& rule, const std::vector<std::string>& tokens,
      Captures& caps) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < rule.pattern.size(); ++i) {
      const auto& pt = rule.pattern[i];
      if (const auto* p = std::get_if<Placeholder>(&pt); p && p->multi) {
        std::vector<std::string> items;
        bool expect_item = true;
        for (; j < tokens.size(); ++j) {
          bool comma = tokens[j] == ",";
          if (expect_item == comma || tokens[j] == ":")
            return "malformed list at token " + std::to_string(j + 1) + " ('" +
                   tokens[j] + "')";
          if (!comma) items.push_back(tokens[j]);
          expect_item = comma;
        }
        if (items.empty()) return "empty list for <I>+";
        if (expect_item) return "list ends with ','";
        caps[p->slot] = std::move(items);
        return std::nullopt;
      }
      if (j >= tokens.size())
        return "statement too short: expected more than " +
               std::to_string(tokens.size()) + " tokens";
      const std::string& tok = tokens[j];
      if (const auto* p = std::get_if<Placeholder>(&pt)) {
        if (detail::is_punct_token(tok))
          return "token " + std::to_string(j + 1) + " is '" + tok +
                 "', expected a word for <" + tag_letter(p->kind) + ">";
        caps[p->slot] = tok;
      } else if (const auto* k = std::get_if<Keyword>(&pt)) {
        if (tok != k->surface)
          return "token " + std::to_string(j + 1) + " is '" + tok +
                 "', expected keyword '" + k->surface + "'";
      } else if (tok != ":") {
        return "token " + std::to_string(j + 1) + " is '" + tok +
               "', expected ':'";
      }
      ++j;
    }
    if (j != tokens.size())
      return "statement too long: " + std::to_string(tokens.size()) +
             " tokens, rule consumes " + std::to_string(j);
    return std::nullopt;
  }

 private:
  RusFile rus_;
};

inline StatementMatcher compile_matcher(RusFile rus) {
  return StatementMatcher(std::move(rus));
}

}  // namespace ucat
