/**
 * @brief Reader for the Manchester-syntax subset written by
 * serialize_manchester (prefixes, ontology header, Class / ObjectProperty /
 * DataProperty / Individual frames with SubClassOf, Types and Facts).
 */
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/ontology.hpp"
#include "ucat/text.hpp"

namespace ucat {

namespace detail {

struct MToken {
  enum class Kind { Word, Iri, Literal, Comma, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

class ManchesterLexer {
 public:
  explicit ManchesterLexer(std::string_view src) : src_(src) {}

  std::vector<MToken> run() {
    std::vector<MToken> out;
    while (true) {
      skip_space();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({MToken::Kind::End, {}, pos});
        return out;
      }
      char c = src_[i_];
      if (c == ',') {
        advance();
        out.push_back({MToken::Kind::Comma, ",", pos});
      } else if (c == '<') {
        advance();
        std::string iri;
        while (i_ < src_.size() && src_[i_] != '>') {
          if (src_[i_] == '\n') throw Error(ErrorCode::SyntaxError, "unterminated IRI", pos);
          iri.push_back(src_[i_]);
          advance();
        }
        if (i_ >= src_.size()) throw Error(ErrorCode::SyntaxError, "unterminated IRI", pos);
        advance();
        out.push_back({MToken::Kind::Iri, std::move(iri), pos});
      } else if (c == '"') {
        std::string lit;
        lit.push_back(c);
        advance();
        bool closed = false;
        while (i_ < src_.size()) {
          char d = src_[i_];
          if (d == '\n') break;
          lit.push_back(d);
          advance();
          if (d == '\\' && i_ < src_.size()) {
            lit.push_back(src_[i_]);
            advance();
          } else if (d == '"') {
            closed = true;
            break;
          }
        }
        if (!closed) throw Error(ErrorCode::SyntaxError, "unterminated literal", pos);
        // datatype suffix: ^^pfx:name or ^^<iri>
        if (src_.substr(i_, 2) == "^^") {
          lit += "^^";
          advance();
          advance();
          if (i_ < src_.size() && src_[i_] == '<') {
            while (i_ < src_.size() && src_[i_] != '>' && src_[i_] != '\n') {
              lit.push_back(src_[i_]);
              advance();
            }
            if (i_ >= src_.size() || src_[i_] != '>')
              throw Error(ErrorCode::SyntaxError, "unterminated datatype IRI", pos);
            lit.push_back('>');
            advance();
          } else {
            while (i_ < src_.size() && !text::is_space(src_[i_]) && src_[i_] != ',') {
              lit.push_back(src_[i_]);
              advance();
            }
          }
        }
        out.push_back({MToken::Kind::Literal, std::move(lit), pos});
      } else {
        std::string word;
        while (i_ < src_.size() && !text::is_space(src_[i_]) &&
               src_[i_] != ',' && src_[i_] != '<' && src_[i_] != '"') {
          word.push_back(src_[i_]);
          advance();
        }
        out.push_back({MToken::Kind::Word, std::move(word), pos});
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
  void skip_space() {
    while (i_ < src_.size()) {
      if (text::is_space(src_[i_])) {
        advance();
      } else if (src_[i_] == '#' && col_ == 1) {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

/// Manchester keywords outside the supported subset.
inline bool is_unsupported_keyword(std::string_view w) {
  static const std::set<std::string, std::less<>> kws = {
      "AnnotationProperty:", "Annotations:", "Characteristics:", "Datatype:",
      "DifferentFrom:", "DifferentIndividuals:", "DisjointClasses:",
      "DisjointProperties:", "DisjointUnionOf:", "DisjointWith:", "Domain:",
      "EquivalentClasses:", "EquivalentProperties:", "EquivalentTo:",
      "HasKey:", "Import:", "InverseOf:", "Range:", "Rule:", "SameAs:",
      "SameIndividual:", "SubPropertyChain:", "SubPropertyOf:"};
  return kws.count(w) != 0;
}

class ManchesterParser {
 public:
  explicit ManchesterParser(std::vector<MToken> toks) : toks_(std::move(toks)) {}

  Ontology run() {
    while (peek_word("Prefix:")) {
      next();
      const MToken& label = expect(MToken::Kind::Word, "prefix label");
      if (label.text.empty() || label.text.back() != ':')
        throw Error(ErrorCode::SyntaxError,
                    "prefix label must end with ':', got '" + label.text + "'",
                    label.pos);
      const MToken& iri = expect(MToken::Kind::Iri, "prefix IRI");
      ont_.prefixes[label.text.substr(0, label.text.size() - 1)] = iri.text;
    }
    if (peek_word("Ontology:")) {
      next();
      if (peek().kind == MToken::Kind::Iri) ont_.base = next().text;
    } else if (auto it = ont_.prefixes.find("ont"); it != ont_.prefixes.end()) {
      ont_.base = it->second;
      if (!ont_.base.empty() && ont_.base.back() == '#') ont_.base.pop_back();
    }

    while (peek().kind != MToken::Kind::End) frame();

    // Entities referenced but not framed are declared implicitly.
    for (auto& [name, rec] : ont_.individuals) {
      for (const auto& t : rec.types) ont_.classes.try_emplace(t);
      for (const auto& f : rec.facts) {
        if (f.has_literal())
          ont_.data_properties.insert(f.property);
        else
          ont_.object_properties.insert(f.property);
      }
    }
    for (const auto& obj : pending_objects_) ont_.individuals.try_emplace(obj);
    return std::move(ont_);
  }

 private:
  const MToken& peek() const { return toks_[pos_]; }
  const MToken& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool peek_word(std::string_view w) const {
    return peek().kind == MToken::Kind::Word && peek().text == w;
  }

  const MToken& expect(MToken::Kind kind, std::string_view what) {
    if (peek().kind != kind) fail_expected(what);
    return next();
  }

  [[noreturn]] void fail_expected(std::string_view what) const {
    const MToken& t = peek();
    std::string found = t.kind == MToken::Kind::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == MToken::Kind::Word && is_unsupported_keyword(t.text))
      throw Error(ErrorCode::UnsupportedConstruct,
                  "'" + t.text + "' is outside the supported Manchester subset",
                  t.pos);
    throw Error(ErrorCode::SyntaxError,
                "expected " + std::string(what) + ", found " + found, t.pos);
  }

  /// Entity reference (`<iri>` or `pfx:local`) resolved to a local name.
  std::string entity() {
    const MToken& t = peek();
    std::string iri;
    if (t.kind == MToken::Kind::Iri) {
      iri = t.text;
    } else if (t.kind == MToken::Kind::Word && t.text.find(':') != std::string::npos &&
               t.text.back() != ':') {
      auto colon = t.text.find(':');
      auto it = ont_.prefixes.find(t.text.substr(0, colon));
      if (it == ont_.prefixes.end())
        throw Error(ErrorCode::UndeclaredPrefix,
                    "prefix '" + t.text.substr(0, colon) + "' is not declared", t.pos);
      iri = it->second + t.text.substr(colon + 1);
    } else {
      fail_expected("an entity IRI");
    }
    const std::string ns = ont_.base + "#";
    if (ont_.base.empty() || iri.compare(0, ns.size(), ns) != 0)
      throw Error(ErrorCode::UnsupportedConstruct,
                  "IRI <" + iri + "> is outside the ontology namespace <" + ns + ">",
                  t.pos);
    std::string local = iri.substr(ns.size());
    if (!text::is_local_name(local))
      throw Error(ErrorCode::IllegalLocalName,
                  "'" + local + "' is not a valid local name", t.pos);
    next();
    return local;
  }

  template <typename F>
  void comma_list(F&& item) {
    item();
    while (peek().kind == MToken::Kind::Comma) {
      next();
      item();
    }
  }

  void frame() {
    const MToken& head = peek();
    if (head.kind != MToken::Kind::Word) fail_expected("a frame keyword");
    if (head.text == "Class:") {
      next();
      auto& parents = ont_.classes[entity()];
      while (peek_word("SubClassOf:")) {
        next();
        comma_list([&] {
          auto p = entity();
          parents.insert(p);
          ont_.classes.try_emplace(p);
        });
      }
      section_end();
    } else if (head.text == "ObjectProperty:") {
      next();
      ont_.object_properties.insert(entity());
      section_end();
    } else if (head.text == "DataProperty:") {
      next();
      ont_.data_properties.insert(entity());
      section_end();
    } else if (head.text == "Individual:") {
      next();
      auto& rec = ont_.individuals[entity()];
      while (true) {
        if (peek_word("Types:")) {
          next();
          comma_list([&] { rec.types.insert(entity()); });
        } else if (peek_word("Facts:")) {
          next();
          comma_list([&] { rec.facts.push_back(fact()); });
        } else {
          break;
        }
      }
      section_end();
    } else {
      fail_expected("a frame keyword");
    }
  }

  Fact fact() {
    Fact f;
    if (peek_word("not")) {
      next();
      f.negated = true;
    }
    f.property = entity();
    if (peek().kind == MToken::Kind::Literal) {
      const MToken& t = next();
      try {
        f.object = parse_literal(t.text, ont_.prefixes);
      } catch (const Error& e) {
        throw Error(ErrorCode::SyntaxError, e.message(), t.pos);
      }
    } else {
      auto obj = entity();
      pending_objects_.insert(obj);
      f.object = std::move(obj);
    }
    return f;
  }

  /// After a frame's sections only another frame or the end may follow.
  void section_end() {
    const MToken& t = peek();
    if (t.kind == MToken::Kind::End) return;
    if (t.kind == MToken::Kind::Word &&
        (t.text == "Class:" || t.text == "ObjectProperty:" ||
         t.text == "DataProperty:" || t.text == "Individual:"))
      return;
    fail_expected("a frame keyword or section");
  }

  std::vector<MToken> toks_;
  std::size_t pos_ = 0;
  Ontology ont_;
  std::set<std::string> pending_objects_;
};

}  // namespace detail

inline Ontology parse_manchester(std::string_view text) {
  return detail::ManchesterParser(detail::ManchesterLexer(text).run()).run();
}

}  // namespace ucat
