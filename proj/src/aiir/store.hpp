#pragma once

// Append-only incident store backed by a JSONL journal: one JSON object per
// line, flushed per append, recovered on open by scanning to the longest
// valid prefix (a torn or corrupt tail is truncated away). Serial numbers
// are assigned in append order and never reused; exact duplicates (same
// canonical content) are rejected via a collision-checked content hash.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aiir/incident.hpp"
#include "aiir/significance.hpp"

namespace aiir {

// FNV-1a 64-bit over the canonical field serialization (the 14 business
// fields joined with a 0x1f separator; the serial number is excluded so the
// hash identifies content, not position).
std::uint64_t content_hash(const IncidentRecord& record);

struct StoreEntry {
  std::uint64_t serial_no = 0;
  IncidentRecord record;
  std::uint64_t hash = 0;
  std::string source; // "csv", "api", or "synth"
  SignificanceVerdict significance;
};

enum class AppendStatus { Accepted, Invalid, Duplicate, Insignificant };

std::string_view to_token(AppendStatus status);

struct AppendResult {
  AppendStatus status = AppendStatus::Invalid;
  std::uint64_t serial_no = 0; // set when accepted
  ValidationReport validation;
  SignificanceVerdict verdict;
};

struct QueryFilter {
  // Canonical-token equality on enum/boolean fields, keyed by normalized
  // column name (e.g. "MARKET_REGION" -> "EMEA").
  std::map<std::string, std::string> equals;
  // Inclusive numeric ranges on percent fields. Records with a bucketed
  // volume ratio never match a range on that field.
  struct Range {
    std::optional<double> min;
    std::optional<double> max;
  };
  std::map<std::string, Range> ranges;
  std::size_t offset = 0;
  std::size_t limit = SIZE_MAX;
};

struct RowOutcome {
  std::size_t row = 0; // 1-based data row within the source file
  AppendStatus status = AppendStatus::Invalid;
  std::uint64_t serial_no = 0;
  std::string message;
};

struct IngestReport {
  std::vector<RowOutcome> rows;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

class Store {
public:
  struct Options {
    std::string path;
    SignificancePolicy significance;
    bool enforcing = true; // false: insignificant records are logged, not rejected
    std::vector<double> bucket_edges = {0, 100, 200}; // for gating bucketed rows
    RegionDomain regions = RegionDomain::builtin();
  };

  // Opens (creating if absent) and recovers the journal. Truncates any
  // invalid tail so the in-memory state is exactly the durable prefix.
  explicit Store(Options options);

  // Validates, gates, dedups, persists. Never throws for data-shaped
  // problems; the result carries the outcome.
  AppendResult append(const IncidentRecord& record, const std::string& source);

  std::vector<StoreEntry> query(const QueryFilter& filter) const;
  const std::vector<StoreEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // All stored records in serial order (for analytics snapshots).
  std::vector<IncidentRecord> records() const;

  IngestReport import_csv(const std::string& path, const std::string& source = "csv");
  // Returns the number of rows written. The emitted file round-trips through
  // import_csv byte-exactly.
  std::size_t export_csv(const QueryFilter& filter, const std::string& path) const;

  const Options& options() const { return options_; }
  // Bytes dropped from the journal tail during recovery (0 = clean open).
  std::size_t recovered_bytes_truncated() const { return truncated_bytes_; }

private:
  void recover();
  void persist(const StoreEntry& entry);

  Options options_;
  std::vector<StoreEntry> entries_;
  std::multimap<std::uint64_t, std::size_t> by_hash_;
  std::size_t truncated_bytes_ = 0;
  mutable std::mutex write_mutex_;
};

} // namespace aiir
