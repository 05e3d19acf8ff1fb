/**
 * @brief Named requirements patterns (ASK queries with a header) and batch
 * matching against an ontology graph.
 *
 * A pattern file starts with comment headers, then the query:
 *   # pattern: model-upload
 *   # description: user uploads a new model
 *   PREFIX ...
 *   ASK { ... }
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ucat/error.hpp"
#include "ucat/query.hpp"
#include "ucat/query_eval.hpp"
#include "ucat/text.hpp"

namespace ucat {

struct Pattern {
  std::string name;
  std::string description;
  query::Query query;
  /// Query text as loaded, header included.
  std::string source;
};

struct CatalogSource {
  std::string file_name;
  std::string content;
};

struct MatchEntry {
  std::string pattern;
  bool matched = false;

  bool operator==(const MatchEntry&) const = default;
};

struct MatchReport {
  std::vector<MatchEntry> entries;

  bool operator==(const MatchReport&) const = default;
  std::size_t size() const { return entries.size(); }
};

namespace detail {

inline bool is_pattern_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
           c == '.';
  });
}

}  // namespace detail

/// Parses one pattern file. Errors carry `file_name` as their source.
inline Pattern load_pattern(const CatalogSource& src) {
  Pattern p;
  p.source = src.content;
  try {
    for (auto line : text::lines(src.content)) {
      line = text::trim(line);
      if (line.empty()) continue;
      if (line.front() != '#') break;
      auto body = text::trim(line.substr(1));
      auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      auto key = text::trim(body.substr(0, colon));
      auto value = text::trim(body.substr(colon + 1));
      if (key == "pattern" && p.name.empty())
        p.name = std::string(value);
      else if (key == "description" && p.description.empty())
        p.description = std::string(value);
    }
    if (!detail::is_pattern_name(p.name))
      throw Error(ErrorCode::MissingPatternName,
                  p.name.empty() ? "missing '# pattern: <name>' header"
                                 : "invalid pattern name '" + p.name + "'");
    p.query = query::parse_query(src.content);
    if (p.query.form != query::Form::Ask)
      throw Error(ErrorCode::NotAskQuery,
                  "pattern '" + p.name + "' must be an ASK query");
    if (p.query.body.patterns.empty())
      throw Error(ErrorCode::NoPositivePattern,
                  "pattern '" + p.name + "' needs at least one positive triple pattern");
  } catch (const Error& e) {
    throw e.with_source(src.file_name);
  }
  return p;
}

inline std::vector<Pattern> load_catalog(const std::vector<CatalogSource>& files) {
  std::vector<Pattern> out;
  std::set<std::string> names;
  for (const auto& f : files) {
    auto p = load_pattern(f);
    if (!names.insert(p.name).second)
      throw Error(ErrorCode::DuplicatePatternName,
                  "pattern name '" + p.name + "' is already used", {}, f.file_name);
    out.push_back(std::move(p));
  }
  return out;
}

/// Reads every `.rq` file of a directory, in file-name order.
inline std::vector<CatalogSource> read_catalog_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error(ErrorCode::IoError, "catalog directory not found: " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".rq")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<CatalogSource> out;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    out.push_back({path.filename().string(), ss.str()});
  }
  return out;
}

inline MatchReport match_patterns(const std::vector<Pattern>& catalog,
                                  const rdf::TripleGraph& g) {
  query::Evaluator eval(g);
  MatchReport report;
  report.entries.reserve(catalog.size());
  for (const auto& p : catalog) report.entries.push_back({p.name, eval.ask(p.query)});
  return report;
}

}  // namespace ucat
