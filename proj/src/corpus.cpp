#include "aps/corpus.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

namespace aps {

namespace {

constexpr std::pair<UnitKind, std::string_view> kUnitNames[] = {
    {UnitKind::edu, "edu"},
    {UnitKind::sentence, "sentence"},
    {UnitKind::paragraph, "paragraph"},
    {UnitKind::document, "document"},
};

}  // namespace

std::string_view to_string(UnitKind kind) {
  for (const auto& [k, name] : kUnitNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<UnitKind> parse_unit_kind(std::string_view name) {
  for (const auto& [k, n] : kUnitNames)
    if (n == name) return k;
  return std::nullopt;
}

std::size_t validate(const SurprisalDocument& doc) {
  const auto fail = [&](std::string_view field, const std::string& what) {
    throw CorpusError(fmt::format("document '{}': field '{}': {}", doc.doc_id, field, what));
  };
  if (doc.values.empty()) fail("values", "must contain at least one value");
  std::size_t negative = 0;
  for (std::size_t i = 0; i < doc.values.size(); ++i) {
    if (!std::isfinite(doc.values[i])) fail("values", fmt::format("non-finite value at index {}", i));
    if (doc.values[i] < 0.0) ++negative;
  }
  if (doc.tokens && doc.tokens->size() != doc.values.size())
    fail("tokens", fmt::format("length {} differs from values length {}", doc.tokens->size(),
                               doc.values.size()));
  for (const auto& [kind, bounds] : doc.units) {
    const auto field = fmt::format("units.{}", to_string(kind));
    std::size_t prev = 0;
    for (std::size_t b : bounds) {
      if (b < 1 || b > doc.values.size())
        fail(field, fmt::format("boundary {} outside [1, {}]", b, doc.values.size()));
      if (b <= prev) fail(field, fmt::format("boundary {} is not strictly increasing", b));
      prev = b;
    }
  }
  return negative;
}

nlohmann::json to_json(const SurprisalDocument& doc) {
  nlohmann::json j;
  j["doc_id"] = doc.doc_id;
  j["values"] = doc.values;
  if (doc.tokens) j["tokens"] = *doc.tokens;
  if (!doc.units.empty()) {
    auto& u = j["units"];
    u = nlohmann::json::object();
    for (const auto& [kind, bounds] : doc.units) u[std::string(to_string(kind))] = bounds;
  }
  if (doc.units_of_measure != "nats") j["units_of_measure"] = doc.units_of_measure;
  return j;
}

SurprisalDocument document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CorpusError("record is not a JSON object");
  SurprisalDocument doc;
  if (!j.contains("doc_id") || !j["doc_id"].is_string())
    throw CorpusError("record lacks a string 'doc_id'");
  doc.doc_id = j["doc_id"].get<std::string>();
  const auto fail = [&](std::string_view field, std::string_view what) {
    throw CorpusError(fmt::format("document '{}': field '{}': {}", doc.doc_id, field, what));
  };
  if (!j.contains("values") || !j["values"].is_array()) fail("values", "missing or not an array");
  doc.values.reserve(j["values"].size());
  for (const auto& v : j["values"]) {
    if (!v.is_number()) fail("values", "contains a non-numeric entry");
    doc.values.push_back(v.get<double>());
  }
  if (j.contains("tokens") && !j["tokens"].is_null()) {
    if (!j["tokens"].is_array()) fail("tokens", "not an array");
    std::vector<std::string> tokens;
    for (const auto& t : j["tokens"]) {
      if (!t.is_string()) fail("tokens", "contains a non-string entry");
      tokens.push_back(t.get<std::string>());
    }
    doc.tokens = std::move(tokens);
  }
  if (j.contains("units") && !j["units"].is_null()) {
    if (!j["units"].is_object()) fail("units", "not an object");
    for (const auto& [name, bounds] : j["units"].items()) {
      const auto kind = parse_unit_kind(name);
      if (!kind) fail("units", fmt::format("unknown unit kind '{}'", name));
      if (!bounds.is_array()) fail("units." + name, "not an array");
      std::vector<std::size_t> b;
      for (const auto& v : bounds) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
          fail("units." + name, "boundaries must be non-negative integers");
        b.push_back(v.get<std::size_t>());
      }
      doc.units[*kind] = std::move(b);
    }
  }
  if (j.contains("units_of_measure")) {
    if (!j["units_of_measure"].is_string()) fail("units_of_measure", "not a string");
    doc.units_of_measure = j["units_of_measure"].get<std::string>();
  }
  return doc;
}

std::vector<SurprisalDocument> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError(fmt::format("cannot open corpus '{}'", path.string()));
  std::vector<SurprisalDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError(fmt::format("line {}: malformed JSON: {}", line_no, e.what()), line_no);
    }
    try {
      auto doc = document_from_json(j);
      validate(doc);
      docs.push_back(std::move(doc));
    } catch (const CorpusError& e) {
      throw CorpusError(fmt::format("line {}: {}", line_no, e.what()), line_no);
    }
  }
  return docs;
}

void write_corpus(const std::vector<SurprisalDocument>& docs,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError(fmt::format("cannot write corpus '{}'", path.string()));
  for (const auto& doc : docs) out << to_json(doc).dump() << '\n';
  if (!out) throw CorpusError(fmt::format("write failed for '{}'", path.string()));
}

std::vector<std::size_t> unit_lengths(const std::vector<std::size_t>& boundaries,
                                      std::size_t n) {
  std::vector<std::size_t> lengths;
  std::size_t start = 0;
  for (std::size_t b : boundaries) {
    lengths.push_back(b - start);
    start = b;
  }
  if (start < n) lengths.push_back(n - start);
  return lengths;
}

}  // namespace aps
