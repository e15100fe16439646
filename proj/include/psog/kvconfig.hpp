#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psog/errors.hpp"

namespace psog {

/// Sectioned key-value text:
///
///   # comment
///   [section.name]
///   key = value
///
/// Order-preserving; duplicate keys within a section are a parse error.
struct KvDocument {
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
    int line = 0;

    const Entry* find(std::string_view key) const {
      for (const auto& e : entries)
        if (e.key == key) return &e;
      return nullptr;
    }
  };

  std::vector<Section> sections;

  Section* find(std::string_view name) {
    for (auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }
  const Section* find(std::string_view name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }

  Section& get_or_add(std::string_view name) {
    if (Section* s = find(name)) return *s;
    sections.push_back(Section{std::string(name), {}, 0});
    return sections.back();
  }

  void set(std::string_view section, std::string_view key, std::string value) {
    Section& s = get_or_add(section);
    for (auto& e : s.entries)
      if (e.key == key) {
        e.value = std::move(value);
        return;
      }
    s.entries.push_back(Entry{std::string(key), std::move(value), 0});
  }

  static KvDocument parse(std::string_view text) {
    KvDocument doc;
    Section* current = nullptr;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                             : eol - pos);
      ++line_no;
      pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

      std::string_view t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ParseError("config line " + std::to_string(line_no) +
                           ": unterminated section header");
        std::string name(trim(t.substr(1, t.size() - 2)));
        if (name.empty())
          throw ParseError("config line " + std::to_string(line_no) + ": empty section name");
        if (doc.find(name))
          throw ParseError("config line " + std::to_string(line_no) + ": duplicate section [" +
                           name + "]");
        doc.sections.push_back(Section{std::move(name), {}, line_no});
        current = &doc.sections.back();
        continue;
      }
      const std::size_t eq = t.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("config line " + std::to_string(line_no) +
                         ": expected 'key = value' or '[section]'");
      if (!current)
        throw ParseError("config line " + std::to_string(line_no) +
                         ": key-value pair before any [section]");
      std::string key(trim(t.substr(0, eq)));
      std::string value(trim(t.substr(eq + 1)));
      if (key.empty())
        throw ParseError("config line " + std::to_string(line_no) + ": empty key");
      if (current->find(key))
        throw ParseError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                         "' in [" + current->name + "]");
      current->entries.push_back(Entry{std::move(key), std::move(value), line_no});
    }
    return doc;
  }

  std::string serialize() const {
    std::string out;
    for (std::size_t i = 0; i < sections.size(); ++i) {
      if (i) out += '\n';
      out += '[';
      out += sections[i].name;
      out += "]\n";
      for (const auto& e : sections[i].entries) {
        out += e.key;
        out += " = ";
        out += e.value;
        out += '\n';
      }
    }
    return out;
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
      s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }
};

/// Typed, strict accessor for one section: every key must be consumed, and
/// finish() reports leftovers (catches misspelled keys in sweep configs).
class SectionReader {
public:
  SectionReader(const KvDocument& doc, std::string name)
      : name_(std::move(name)), section_(doc.find(name_)) {
    if (section_) consumed_.assign(section_->entries.size(), false);
  }

  bool present() const { return section_ != nullptr; }

  bool has(std::string_view key) const { return section_ && section_->find(key); }

  std::string get_string(std::string_view key, std::string fallback) {
    const KvDocument::Entry* e = take(key);
    return e ? e->value : std::move(fallback);
  }

  std::string require_string(std::string_view key) {
    const KvDocument::Entry* e = take(key);
    if (!e)
      throw ConfigError("config: missing required key '" + std::string(key) + "' in [" + name_ +
                        "]");
    return e->value;
  }

  double get_double(std::string_view key, double fallback) {
    const KvDocument::Entry* e = take(key);
    return e ? parse_double(*e) : fallback;
  }

  long get_int(std::string_view key, long fallback) {
    const KvDocument::Entry* e = take(key);
    if (!e) return fallback;
    long v = 0;
    auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc{} || p != e->value.data() + e->value.size())
      throw ConfigError(where(*e) + ": expected an integer, got '" + e->value + "'");
    return v;
  }

  std::uint64_t get_uint64(std::string_view key, std::uint64_t fallback) {
    const KvDocument::Entry* e = take(key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc{} || p != e->value.data() + e->value.size())
      throw ConfigError(where(*e) + ": expected an unsigned integer, got '" + e->value + "'");
    return v;
  }

  bool get_bool(std::string_view key, bool fallback) {
    const KvDocument::Entry* e = take(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ConfigError(where(*e) + ": expected 'true' or 'false', got '" + e->value + "'");
  }

  /// Comma list ("1, 2.5, 4") or range ("lo:hi:step", endpoint included when
  /// it lands within half a step).
  std::vector<double> get_values(std::string_view key, std::vector<double> fallback) {
    const KvDocument::Entry* e = take(key);
    if (!e) return fallback;
    return parse_values(*e);
  }

  bool has_values(std::string_view key) const { return has(key); }

  /// Throws if any key in the section was never consumed.
  void finish() const {
    if (!section_) return;
    for (std::size_t i = 0; i < section_->entries.size(); ++i)
      if (!consumed_[i])
        throw ConfigError("config line " + std::to_string(section_->entries[i].line) +
                          ": unknown key '" + section_->entries[i].key + "' in [" + name_ + "]");
  }

private:
  const KvDocument::Entry* take(std::string_view key) {
    if (!section_) return nullptr;
    for (std::size_t i = 0; i < section_->entries.size(); ++i)
      if (section_->entries[i].key == key) {
        consumed_[i] = true;
        return &section_->entries[i];
      }
    return nullptr;
  }

  std::string where(const KvDocument::Entry& e) const {
    return "config line " + std::to_string(e.line) + " ([" + name_ + "] " + e.key + ")";
  }

  double parse_double(const KvDocument::Entry& e) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || p != e.value.data() + e.value.size())
      throw ConfigError(where(e) + ": expected a number, got '" + e.value + "'");
    return v;
  }

  std::vector<double> parse_values(const KvDocument::Entry& e) const {
    const std::string& s = e.value;
    std::vector<double> out;
    auto to_double = [&](std::string_view piece) {
      piece = KvDocument::trim(piece);
      double v = 0.0;
      auto [p, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
      if (ec != std::errc{} || p != piece.data() + piece.size())
        throw ConfigError(where(e) + ": expected a number, got '" + std::string(piece) + "'");
      return v;
    };
    if (s.find(':') != std::string::npos) {
      std::vector<std::string_view> parts = split(s, ':');
      if (parts.size() != 3)
        throw ConfigError(where(e) + ": range syntax is lo:hi:step");
      const double lo = to_double(parts[0]);
      const double hi = to_double(parts[1]);
      const double step = to_double(parts[2]);
      if (!(step > 0.0) || hi < lo)
        throw ConfigError(where(e) + ": range requires hi >= lo and step > 0");
      const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
      for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
      return out;
    }
    for (std::string_view piece : split(s, ','))
      out.push_back(to_double(piece));
    if (out.empty()) throw ConfigError(where(e) + ": empty value list");
    return out;
  }

  static std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t p = s.find(sep, start);
      if (p == std::string_view::npos) {
        parts.push_back(s.substr(start));
        return parts;
      }
      parts.push_back(s.substr(start, p - start));
      start = p + 1;
    }
  }

  std::string name_;
  const KvDocument::Section* section_;
  std::vector<bool> consumed_;
};

} // namespace psog
