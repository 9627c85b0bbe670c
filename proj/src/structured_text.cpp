#include "fmdp/structured_text.hpp"

#include <charconv>
#include <system_error>

#include "fmdp/errors.hpp"

namespace fmdp {

const TextEntry* TextSection::find(std::string_view key) const {
  for (const auto& entry : entries) {
    if (entry.key == key) return &entry;
  }
  return nullptr;
}

const TextSection* TextDocument::find(std::string_view name) const {
  for (const auto& section : sections) {
    if (section.name == name) return &section;
  }
  return nullptr;
}

std::string_view trim(std::string_view text) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && blank(text.front())) text.remove_prefix(1);
  while (!text.empty() && blank(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split(std::string_view text, char separator) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(separator, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) parts.push_back(text.substr(start, i - start));
  }
  return parts;
}

TextDocument parse_structured_text(std::string_view text,
                                   std::vector<TextDiagnostic>& diagnostics) {
  TextDocument doc;
  doc.sections.push_back(TextSection{"", 0, {}});
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        diagnostics.push_back({line_no, "unterminated section header"});
        continue;
      }
      auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) {
        diagnostics.push_back({line_no, "empty section name"});
        continue;
      }
      if (doc.find(name) != nullptr) {
        diagnostics.push_back({line_no, "duplicate section [" + std::string(name) + "]"});
      }
      doc.sections.push_back(TextSection{std::string(name), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      diagnostics.push_back({line_no, "expected key = value"});
      continue;
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      diagnostics.push_back({line_no, "missing key before '='"});
      continue;
    }
    auto& section = doc.sections.back();
    if (section.find(key) != nullptr) {
      diagnostics.push_back({line_no, "duplicate key '" + std::string(key) + "'"});
      continue;
    }
    section.entries.push_back(TextEntry{std::string(key), std::string(value), line_no});
  }
  if (doc.sections.front().entries.empty()) doc.sections.erase(doc.sections.begin());
  return doc;
}

TextDocument parse_structured_text(std::string_view text) {
  std::vector<TextDiagnostic> diagnostics;
  auto doc = parse_structured_text(text, diagnostics);
  if (!diagnostics.empty()) {
    throw StructuralError("line " + std::to_string(diagnostics.front().line) + ": " +
                          diagnostics.front().message);
  }
  return doc;
}

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> values;
  for (auto token : split_whitespace(text)) {
    auto value = parse_double(token);
    if (!value) {
      throw StructuralError(std::string(what) + ": bad number '" + std::string(token) + "'");
    }
    values.push_back(*value);
  }
  return values;
}

std::vector<std::uint64_t> parse_uint_list(std::string_view text, std::string_view what) {
  std::vector<std::uint64_t> values;
  for (auto token : split_whitespace(text)) {
    auto value = parse_uint(token);
    if (!value) {
      throw StructuralError(std::string(what) + ": bad integer '" + std::string(token) + "'");
    }
    values.push_back(*value);
  }
  return values;
}

}  // namespace fmdp
