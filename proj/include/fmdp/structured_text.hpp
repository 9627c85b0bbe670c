#pragma once

// Reader/writer for the bracketed-section, key = value text format shared by
// model files, estimator checkpoints and experiment configs.
//
//   # comment
//   [section.name]
//   key = value
//
// Keys appearing before the first header belong to a section with an empty
// name. Duplicate keys inside a section are reported as errors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmdp {

struct TextEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct TextSection {
  std::string name;
  std::size_t line = 0;
  std::vector<TextEntry> entries;

  const TextEntry* find(std::string_view key) const;
};

struct TextDocument {
  std::vector<TextSection> sections;

  const TextSection* find(std::string_view name) const;
};

struct TextDiagnostic {
  std::size_t line = 0;
  std::string message;
};

/// Parses `text`, appending every syntax problem to `diagnostics`.
TextDocument parse_structured_text(std::string_view text,
                                   std::vector<TextDiagnostic>& diagnostics);

/// Parses `text` and throws StructuralError on the first problem.
TextDocument parse_structured_text(std::string_view text);

/// 17 significant digits, "." decimal separator, independent of locale.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char separator);
/// Splits on runs of blanks.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::string join_doubles(const std::vector<double>& values);
std::vector<double> parse_double_list(std::string_view text, std::string_view what);
std::vector<std::uint64_t> parse_uint_list(std::string_view text, std::string_view what);

}  // namespace fmdp
