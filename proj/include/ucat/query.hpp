/**
 * @brief SPARQL subset: PREFIX declarations, ASK / SELECT over a basic graph
 * pattern with (nestable) FILTER NOT EXISTS groups.
 */
#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/rdf.hpp"
#include "ucat/text.hpp"

namespace ucat::query {

struct Variable {
  std::string name;  // without '?'

  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

/// Variable or ground term; prefixed names are expanded while parsing.
using PatternTerm = std::variant<Variable, rdf::Term>;

inline std::string to_string(const PatternTerm& t) {
  if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
  return std::get<rdf::Term>(t).to_string();
}

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  bool operator==(const TriplePattern&) const = default;
};

struct GroupPattern {
  std::vector<TriplePattern> patterns;
  std::vector<GroupPattern> not_exists;

  bool operator==(const GroupPattern&) const = default;
  bool empty() const { return patterns.empty() && not_exists.empty(); }
};

enum class Form { Ask, Select };

struct Query {
  std::map<std::string, std::string> prefixes;
  Form form = Form::Ask;
  /// Projection for SELECT; empty together with select_all = true for `*`.
  std::vector<std::string> projection;
  bool select_all = false;
  GroupPattern body;

  bool operator==(const Query&) const = default;
};

/// Variables of the group's own triple patterns (not its filters), in order of
/// first appearance.
inline std::vector<std::string> pattern_variables(const GroupPattern& g) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto add = [&](const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t))
      if (seen.insert(v->name).second) out.push_back(v->name);
  };
  for (const auto& p : g.patterns) {
    add(p.subject);
    add(p.predicate);
    add(p.object);
  }
  return out;
}

/// Variables the query reports: the explicit projection, or every variable of
/// the outer patterns for `SELECT *` and ASK.
inline std::vector<std::string> result_variables(const Query& q) {
  if (q.form == Form::Select && !q.select_all) return q.projection;
  return pattern_variables(q.body);
}

namespace detail {

struct Token {
  enum class Kind { Iri, PName, Var, String, Word, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  /// Datatype for String tokens (raw: `<iri>` or `pfx:name`), may be empty.
  std::string datatype;
  SourcePos pos;
};

inline bool pn_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Token::Kind::End, {}, {}, pos});
        return out;
      }
      char c = src_[i_];
      if (c == '<') {
        advance();
        std::string iri;
        while (i_ < src_.size() && src_[i_] != '>') {
          if (text::is_space(src_[i_]))
            throw Error(ErrorCode::SyntaxError, "whitespace inside IRI", {line_, col_});
          iri.push_back(src_[i_]);
          advance();
        }
        if (i_ >= src_.size()) throw Error(ErrorCode::SyntaxError, "unterminated IRI", pos);
        advance();
        out.push_back({Token::Kind::Iri, std::move(iri), {}, pos});
      } else if (c == '?' || c == '$') {
        advance();
        std::string name;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                    src_[i_] == '_')) {
          name.push_back(src_[i_]);
          advance();
        }
        if (!text::is_local_name(name))
          throw Error(ErrorCode::SyntaxError, "invalid variable name '?" + name + "'",
                      pos);
        out.push_back({Token::Kind::Var, std::move(name), {}, pos});
      } else if (c == '"') {
        out.push_back(string_literal(pos));
      } else if (c == '{' || c == '}' || c == '.' || c == '*' || c == ';' ||
                 c == ',' || c == '(' || c == ')') {
        advance();
        out.push_back({Token::Kind::Punct, std::string(1, c), {}, pos});
      } else if (pn_char(c) || c == ':') {
        std::string word;
        bool has_colon = false;
        while (i_ < src_.size() && (pn_char(src_[i_]) || src_[i_] == ':')) {
          has_colon |= src_[i_] == ':';
          word.push_back(src_[i_]);
          advance();
        }
        out.push_back({has_colon ? Token::Kind::PName : Token::Kind::Word,
                       std::move(word), {}, pos});
      } else {
        throw Error(ErrorCode::SyntaxError,
                    std::string("unexpected character '") + c + "'", pos);
      }
    }
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip() {
    while (i_ < src_.size()) {
      if (text::is_space(src_[i_])) {
        advance();
      } else if (src_[i_] == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token string_literal(SourcePos pos) {
    advance();
    std::string value;
    bool closed = false;
    while (i_ < src_.size()) {
      char d = src_[i_];
      if (d == '\n') break;
      advance();
      if (d == '\\' && i_ < src_.size()) {
        value.push_back(src_[i_]);
        advance();
      } else if (d == '"') {
        closed = true;
        break;
      } else {
        value.push_back(d);
      }
    }
    if (!closed) throw Error(ErrorCode::SyntaxError, "unterminated string", pos);
    Token t{Token::Kind::String, std::move(value), {}, pos};
    if (src_.substr(i_, 1) == "@")
      throw Error(ErrorCode::SyntaxError, "language-tagged literals are not supported",
                  {line_, col_});
    if (src_.substr(i_, 2) == "^^") {
      advance();
      advance();
      if (i_ < src_.size() && src_[i_] == '<') {
        t.datatype.push_back('<');
        advance();
        while (i_ < src_.size() && src_[i_] != '>') {
          t.datatype.push_back(src_[i_]);
          advance();
        }
        if (i_ >= src_.size())
          throw Error(ErrorCode::SyntaxError, "unterminated datatype IRI", pos);
        t.datatype.push_back('>');
        advance();
      } else {
        while (i_ < src_.size() && (pn_char(src_[i_]) || src_[i_] == ':')) {
          t.datatype.push_back(src_[i_]);
          advance();
        }
        if (t.datatype.empty())
          throw Error(ErrorCode::SyntaxError, "missing datatype after '^^'",
                      {line_, col_});
      }
    }
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Query run() {
    Query q;
    while (keyword("PREFIX")) {
      next();
      const Token& label = peek();
      if (label.kind != Token::Kind::PName || label.text.back() != ':' ||
          label.text.find(':') != label.text.size() - 1)
        fail("a prefix label such as 'ont:'");
      next();
      if (peek().kind != Token::Kind::Iri) fail("an IRI in angle brackets");
      q.prefixes[label.text.substr(0, label.text.size() - 1)] = next().text;
    }
    prefixes_ = &q.prefixes;

    if (keyword("ASK")) {
      next();
      q.form = Form::Ask;
    } else if (keyword("SELECT")) {
      next();
      q.form = Form::Select;
      if (keyword("DISTINCT")) next();
      if (punct("*")) {
        next();
        q.select_all = true;
      } else {
        if (peek().kind != Token::Kind::Var) fail("'*' or a projected variable");
        while (peek().kind == Token::Kind::Var) q.projection.push_back(next().text);
      }
    } else {
      fail("ASK, SELECT or PREFIX");
    }
    if (keyword("WHERE")) next();
    SourcePos body_pos = peek().pos;
    q.body = group();
    if (q.body.empty())
      throw Error(ErrorCode::EmptyBody, "query body has no triple pattern or filter",
                  body_pos);
    if (peek().kind != Token::Kind::End) fail("end of query");
    return q;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool keyword(std::string_view kw) const {
    return peek().kind == Token::Kind::Word && upper(peek().text) == kw;
  }
  bool punct(std::string_view p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }

  [[noreturn]] void fail(std::string_view expected) const {
    const Token& t = peek();
    std::string found;
    switch (t.kind) {
      case Token::Kind::End: found = "end of input"; break;
      case Token::Kind::Iri: found = "<" + t.text + ">"; break;
      case Token::Kind::Var: found = "?" + t.text; break;
      case Token::Kind::String: found = "\"" + t.text + "\""; break;
      default: found = "'" + t.text + "'";
    }
    throw Error(ErrorCode::SyntaxError,
                "expected " + std::string(expected) + ", found " + found, t.pos);
  }

  std::string expand(const Token& t) const {
    auto colon = t.text.find(':');
    std::string label = t.text.substr(0, colon);
    auto it = prefixes_->find(label);
    if (it == prefixes_->end())
      throw Error(ErrorCode::UndeclaredPrefix,
                  "prefix '" + label + ":' is not declared", t.pos);
    return it->second + t.text.substr(colon + 1);
  }

  PatternTerm term(bool allow_literal, bool allow_a) {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::Var: return Variable{next().text};
      case Token::Kind::Iri: return rdf::Term::iri(next().text);
      case Token::Kind::PName: return rdf::Term::iri(expand(next()));
      case Token::Kind::String: {
        if (!allow_literal) fail("a variable or IRI");
        const Token& s = next();
        std::string dt = rdf::vocab::xsd_string();
        if (!s.datatype.empty()) {
          if (s.datatype.front() == '<') {
            dt = s.datatype.substr(1, s.datatype.size() - 2);
          } else {
            Token pn{Token::Kind::PName, s.datatype, {}, s.pos};
            if (s.datatype.find(':') == std::string::npos) fail("a prefixed datatype");
            dt = expand(pn);
          }
        }
        return rdf::Term::literal(s.text, dt);
      }
      case Token::Kind::Word:
        if (allow_a && t.text == "a") {
          next();
          return rdf::Term::iri(rdf::vocab::type());
        }
        [[fallthrough]];
      default:
        fail(allow_literal ? "a variable, IRI or literal" : "a variable or IRI");
    }
  }

  GroupPattern group() {
    if (!punct("{")) fail("'{'");
    next();
    GroupPattern g;
    while (!punct("}")) {
      if (keyword("FILTER")) {
        next();
        if (!keyword("NOT")) fail("NOT EXISTS (only FILTER NOT EXISTS is supported)");
        next();
        if (!keyword("EXISTS")) fail("EXISTS");
        next();
        SourcePos inner_pos = peek().pos;
        g.not_exists.push_back(group());
        if (g.not_exists.back().empty())
          throw Error(ErrorCode::EmptyBody, "FILTER NOT EXISTS group is empty",
                      inner_pos);
        if (punct(".")) next();
        continue;
      }
      TriplePattern tp;
      tp.subject = term(false, false);
      tp.predicate = term(false, true);
      tp.object = term(true, false);
      g.patterns.push_back(std::move(tp));
      if (punct(".")) {
        next();
      } else if (!punct("}") && !keyword("FILTER")) {
        fail("'.', '}' or FILTER");
      }
    }
    next();
    return g;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::map<std::string, std::string>* prefixes_ = nullptr;
};

}  // namespace detail

inline Query parse_query(std::string_view text) {
  return detail::Parser(detail::Lexer(text).run()).run();
}

}  // namespace ucat::query
