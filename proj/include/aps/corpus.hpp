#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace aps {

enum class UnitKind { edu, sentence, paragraph, document };

std::string_view to_string(UnitKind kind);
std::optional<UnitKind> parse_unit_kind(std::string_view name);

/// Per-token surprisal of one document.
///
/// Unit boundaries are exclusive end positions: a sentence spanning tokens
/// 0..9 is recorded as boundary 10. Sequences are strictly increasing and
/// every entry lies in [1, values.size()].
struct SurprisalDocument {
  std::string doc_id;
  std::vector<double> values;
  std::optional<std::vector<std::string>> tokens;
  std::map<UnitKind, std::vector<std::size_t>> units;
  std::string units_of_measure = "nats";

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const SurprisalDocument&) const = default;
};

/// Thrown by the reader and validator. `line` is 1-based, 0 when not tied to
/// a file position.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::string message, std::size_t line = 0)
      : std::runtime_error(std::move(message)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Checks the hard invariants and throws CorpusError naming doc_id and the
/// offending field. Returns the number of negative values, which are legal
/// (scores may be post-processed) but worth a warning.
std::size_t validate(const SurprisalDocument& doc);

nlohmann::json to_json(const SurprisalDocument& doc);
SurprisalDocument document_from_json(const nlohmann::json& j);

std::vector<SurprisalDocument> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::vector<SurprisalDocument>& docs,
                  const std::filesystem::path& path);

/// Lengths of consecutive units; tokens after the last boundary form a final
/// unit ending at `n`.
std::vector<std::size_t> unit_lengths(const std::vector<std::size_t>& boundaries,
                                      std::size_t n);

}  // namespace aps
