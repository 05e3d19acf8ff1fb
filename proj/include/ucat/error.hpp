/**
 * @brief Error and diagnostic types shared by every ucat component.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ucat {

enum class ErrorCode {
  // RUS grammar
  MissingArrow,
  UnknownTag,
  SlotResolutionError,
  TupleArityError,
  MultiNotLast,
  InvalidPattern,
  // use-case parsing
  NoRuleMatches,
  EmptyList,
  // types file
  UndeclaredClass,
  SubclassCycle,
  MalformedTypes,
  // ontology
  UntypedIndividuals,
  UnknownEntityInTuple,
  MalformedFactValue,
  IllegalLocalName,
  InvalidIri,
  UnsupportedConstruct,
  // queries
  SyntaxError,
  UndeclaredPrefix,
  EmptyBody,
  OracleTooLarge,
  // pattern catalog
  DuplicatePatternName,
  NotAskQuery,
  MissingPatternName,
  NoPositivePattern,
  // service / cli
  StageError,
  UnknownSession,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingArrow: return "MissingArrow";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::SlotResolutionError: return "SlotResolutionError";
    case ErrorCode::TupleArityError: return "TupleArityError";
    case ErrorCode::MultiNotLast: return "MultiNotLast";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::NoRuleMatches: return "NoRuleMatches";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::UndeclaredClass: return "UndeclaredClass";
    case ErrorCode::SubclassCycle: return "SubclassCycle";
    case ErrorCode::MalformedTypes: return "MalformedTypes";
    case ErrorCode::UntypedIndividuals: return "UntypedIndividuals";
    case ErrorCode::UnknownEntityInTuple: return "UnknownEntityInTuple";
    case ErrorCode::MalformedFactValue: return "MalformedFactValue";
    case ErrorCode::IllegalLocalName: return "IllegalLocalName";
    case ErrorCode::InvalidIri: return "InvalidIri";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndeclaredPrefix: return "UndeclaredPrefix";
    case ErrorCode::EmptyBody: return "EmptyBody";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::DuplicatePatternName: return "DuplicatePatternName";
    case ErrorCode::NotAskQuery: return "NotAskQuery";
    case ErrorCode::MissingPatternName: return "MissingPatternName";
    case ErrorCode::NoPositivePattern: return "NoPositivePattern";
    case ErrorCode::StageError: return "StageError";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Position inside a text input. Lines and columns are 1-based; 0 means unknown.
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  bool operator==(const SourcePos&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, SourcePos pos = {},
        std::string source = {})
      : std::runtime_error(format(code, message, pos, source)),
        code_(code),
        message_(std::move(message)),
        pos_(pos),
        source_(std::move(source)) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code/position decoration added by what().
  const std::string& message() const noexcept { return message_; }
  const SourcePos& pos() const noexcept { return pos_; }
  std::optional<std::size_t> line() const {
    return pos_.line == 0 ? std::nullopt : std::optional(pos_.line);
  }
  /// File or input name the error belongs to, if known.
  const std::string& source() const noexcept { return source_; }

  Error with_source(std::string source) const {
    return Error(code_, message_, pos_, std::move(source));
  }

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            const SourcePos& pos, const std::string& source) {
    std::string out;
    if (!source.empty()) out += source + ":";
    if (pos.line != 0) {
      out += std::to_string(pos.line) + ":";
      if (pos.column != 0) out += std::to_string(pos.column) + ":";
    }
    if (!out.empty()) out += " ";
    out += std::string(to_string(code)) + ": " + message;
    return out;
  }

  ErrorCode code_;
  std::string message_;
  SourcePos pos_;
  std::string source_;
};

/// Non-fatal finding reported alongside a successful result.
struct Warning {
  std::string code;
  std::string message;
  std::size_t line = 0;

  bool operator==(const Warning&) const = default;
};

}  // namespace ucat
