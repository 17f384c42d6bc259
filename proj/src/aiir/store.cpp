#include "aiir/store.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aiir/csv.hpp"
#include "aiir/json_io.hpp"
#include "aiir/text.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

namespace aiir {

std::uint64_t content_hash(const IncidentRecord& record) {
  std::uint64_t hash = 14695981039346656037ULL;
  auto mix = [&hash](std::string_view bytes) {
    for (const char c : bytes) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 1099511628211ULL;
    }
  };
  bool first = true;
  for (const auto& field : canonical_fields(record)) {
    if (!first) mix(std::string_view("\x1f", 1));
    first = false;
    mix(field);
  }
  return hash;
}

std::string_view to_token(AppendStatus status) {
  switch (status) {
    case AppendStatus::Accepted: return "accepted";
    case AppendStatus::Invalid: return "invalid";
    case AppendStatus::Duplicate: return "duplicate";
    case AppendStatus::Insignificant: return "insignificant";
  }
  return "invalid";
}

namespace {

nlohmann::json entry_to_json(const StoreEntry& entry) {
  nlohmann::json j;
  j["serial_no"] = entry.serial_no;
  j["record"] = record_to_json(entry.record);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(entry.hash));
  j["content_hash"] = std::string("fnv1a64:") + hex;
  j["source"] = entry.source;
  j["significance"] = {{"significant", entry.significance.significant},
                       {"price_trigger", entry.significance.price_trigger},
                       {"volume_trigger", entry.significance.volume_trigger}};
  return j;
}

std::optional<StoreEntry> entry_from_line(const std::string& line, const RegionDomain& regions) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    StoreEntry entry;
    entry.serial_no = j.at("serial_no").get<std::uint64_t>();
    entry.record = record_from_json(j.at("record"), regions);
    const std::string hash_text = j.at("content_hash").get<std::string>();
    if (hash_text.rfind("fnv1a64:", 0) != 0 || hash_text.size() != 8 + 16) return std::nullopt;
    entry.hash = std::stoull(hash_text.substr(8), nullptr, 16);
    if (entry.hash != content_hash(entry.record)) return std::nullopt; // bit rot
    entry.source = j.at("source").get<std::string>();
    const auto& sig = j.at("significance");
    entry.significance.significant = sig.at("significant").get<bool>();
    entry.significance.price_trigger = sig.at("price_trigger").get<bool>();
    entry.significance.volume_trigger = sig.at("volume_trigger").get<bool>();
    return entry;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

} // namespace

Store::Store(Options options) : options_(std::move(options)) {
  if (options_.path.empty()) {
    throw std::invalid_argument("store path must not be empty");
  }
  recover();
}

void Store::recover() {
  std::ifstream in(options_.path, std::ios::binary);
  if (!in.is_open()) {
    // Fresh store; the journal is created on first append.
    return;
  }

  std::size_t valid_bytes = 0;
  std::string line;
  while (true) {
    const auto line_start = in.tellg();
    if (!std::getline(in, line)) break;
    // A durable line ends in '\n'; getline at EOF without the delimiter
    // indicates a torn append.
    const bool complete = !in.eof();
    if (!complete && line.empty()) break;
    auto entry = entry_from_line(line, options_.regions);
    if (!entry || !complete) break;
    if (entry->serial_no != entries_.size() + 1) break; // serial gap: corrupt tail
    by_hash_.emplace(entry->hash, entries_.size());
    entries_.push_back(std::move(*entry));
    valid_bytes = static_cast<std::size_t>(line_start) + line.size() + 1;
  }
  in.clear();
  in.seekg(0, std::ios::end);
  const auto total_bytes = static_cast<std::size_t>(in.tellg());
  in.close();

  if (valid_bytes < total_bytes) {
    // Drop the torn/corrupt tail so the journal equals the recovered state.
    truncated_bytes_ = total_bytes - valid_bytes;
#if defined(__unix__) || defined(__APPLE__)
    if (::truncate(options_.path.c_str(), static_cast<off_t>(valid_bytes)) != 0) {
      throw std::runtime_error("failed to truncate corrupt journal tail: " + options_.path);
    }
#else
    std::ifstream reread(options_.path, std::ios::binary);
    std::string keep(valid_bytes, '\0');
    reread.read(keep.data(), static_cast<std::streamsize>(valid_bytes));
    reread.close();
    std::ofstream rewrite(options_.path, std::ios::binary | std::ios::trunc);
    rewrite.write(keep.data(), static_cast<std::streamsize>(valid_bytes));
#endif
  }
}

void Store::persist(const StoreEntry& entry) {
  std::ofstream out(options_.path, std::ios::binary | std::ios::app);
  if (!out.is_open()) {
    throw std::runtime_error("cannot open journal for append: " + options_.path);
  }
  const std::string line = entry_to_json(entry).dump() + "\n";
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("journal append failed: " + options_.path);
  }
}

AppendResult Store::append(const IncidentRecord& record, const std::string& source) {
  std::lock_guard<std::mutex> lock(write_mutex_);

  AppendResult result;
  result.validation = validate_record(record, ValidationMode::Strict, options_.regions);
  if (!result.validation.ok) {
    result.status = AppendStatus::Invalid;
    return result;
  }

  result.verdict = assess_record(record, options_.significance, options_.bucket_edges);
  if (!result.verdict.significant && options_.enforcing) {
    result.status = AppendStatus::Insignificant;
    return result;
  }

  const std::uint64_t hash = content_hash(record);
  const auto [begin, end] = by_hash_.equal_range(hash);
  for (auto it = begin; it != end; ++it) {
    // Same hash: confirm the contents really match before rejecting, so a
    // genuine hash collision is not mistaken for a duplicate.
    if (canonical_fields(entries_[it->second].record) == canonical_fields(record)) {
      result.status = AppendStatus::Duplicate;
      result.serial_no = entries_[it->second].serial_no;
      return result;
    }
  }

  StoreEntry entry;
  entry.serial_no = entries_.size() + 1;
  entry.record = record;
  entry.record.serial_no = entry.serial_no;
  entry.hash = hash;
  entry.source = source;
  entry.significance = result.verdict;

  persist(entry);
  by_hash_.emplace(hash, entries_.size());
  entries_.push_back(std::move(entry));

  result.status = AppendStatus::Accepted;
  result.serial_no = entries_.back().serial_no;
  return result;
}

namespace {

// Field accessors for query filtering, keyed by normalized column name.
std::optional<std::string> token_field(const IncidentRecord& r, const std::string& key) {
  if (key == "INSTRUMENT_CATEGORY") return std::string(to_token(r.instrument_category));
  if (key == "MARKET_REGION") return r.market_region;
  if (key == "AI_SYSTEM_CATEGORY") return std::string(to_token(r.ai_system_category));
  if (key == "INCIDENT_PATTERN") return std::string(to_token(r.incident_pattern));
  if (key == "MARKET_IMPACT_DETECTED") return std::string(yes_no(r.market_impact_detected));
  if (key == "ISSUE_FLAG") return std::string(yes_no(r.issue_flag));
  if (key == "HUMAN_OVERSIGHT_INVOLVED") return std::string(yes_no(r.human_oversight_involved));
  if (key == "FAIL_SAFE_TRIGGERED") return std::string(yes_no(r.fail_safe_triggered));
  return std::nullopt;
}

std::optional<double> numeric_field(const IncidentRecord& r, const std::string& key) {
  if (key == "TOTAL_BUY_VOLUME_PCT") return r.total_buy_volume_pct;
  if (key == "TOTAL_SELL_VOLUME_PCT") return r.total_sell_volume_pct;
  if (key == "AI_BUY_VOLUME_PCT") return r.ai_buy_volume_pct;
  if (key == "AI_SELL_VOLUME_PCT") return r.ai_sell_volume_pct;
  if (key == "PRICE_RANGE_PCT") return r.price_range_pct;
  if (key == "VOLUME_VS_30D_AVG_PCT") {
    if (r.volume_vs_30d.is_bucket()) return std::nullopt; // buckets never match ranges
    return r.volume_vs_30d.exact_value();
  }
  return std::nullopt;
}

// A default record has an exact volume ratio, so probing it tells us whether
// a key names a real column without tripping the bucket carve-out above.
bool is_token_key(const std::string& key) {
  static const IncidentRecord probe{};
  return token_field(probe, key).has_value();
}

bool is_numeric_key(const std::string& key) {
  static const IncidentRecord probe{};
  return numeric_field(probe, key).has_value();
}

} // namespace

std::vector<StoreEntry> Store::query(const QueryFilter& filter) const {
  for (const auto& [key, expected] : filter.equals) {
    if (!is_token_key(normalize_token(key))) {
      throw ParseError(key, expected, "unknown filter field: " + key);
    }
  }
  for (const auto& [key, range] : filter.ranges) {
    if (!is_numeric_key(normalize_token(key))) {
      throw ParseError(key, "", "unknown range field: " + key);
    }
    if (range.min && range.max && *range.min > *range.max) {
      throw std::invalid_argument("malformed range on " + key + ": min exceeds max");
    }
  }

  std::vector<StoreEntry> out;
  std::size_t skipped = 0;
  for (const auto& entry : entries_) {
    bool match = true;
    for (const auto& [key, expected] : filter.equals) {
      const auto actual = token_field(entry.record, normalize_token(key));
      if (!actual || *actual != normalize_token(expected)) {
        match = false;
        break;
      }
    }
    for (const auto& [key, range] : filter.ranges) {
      if (!match) break;
      const auto value = numeric_field(entry.record, normalize_token(key));
      if (!value || (range.min && *value < *range.min) || (range.max && *value > *range.max)) {
        match = false;
      }
    }
    if (!match) continue;
    if (skipped < filter.offset) {
      ++skipped;
      continue;
    }
    if (out.size() >= filter.limit) break;
    out.push_back(entry);
  }
  return out;
}

std::vector<IncidentRecord> Store::records() const {
  std::vector<IncidentRecord> out;
  out.reserve(entries_.size());
  for (const auto& entry : entries_) out.push_back(entry.record);
  return out;
}

IngestReport Store::import_csv(const std::string& path, const std::string& source) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open CSV file: " + path);
  }

  IngestReport report;
  // Parse the header strictly up front (throws on a wrong column set), then
  // process rows one by one so a malformed row rejects just itself.
  std::string header_line;
  std::size_t line_no = 0;
  while (std::getline(in, header_line)) {
    ++line_no;
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    if (!trim(header_line).empty()) break;
  }
  {
    std::istringstream header_only(header_line + "\n");
    read_csv(header_only, options_.regions); // header validation only
  }

  const auto& columns = csv_columns();
  std::string line;
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row_index;
    RowOutcome outcome;
    outcome.row = row_index;
    try {
      const auto cells = split_csv_line(line);
      if (cells.size() != columns.size()) {
        throw ParseError("csv", line,
                         "line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(columns.size()));
      }
      std::map<std::string, std::string> row;
      for (std::size_t i = 0; i < columns.size(); ++i) row[columns[i]] = cells[i];
      const IncidentRecord record = parse_record(row, options_.regions);
      const AppendResult result = append(record, source);
      outcome.status = result.status;
      outcome.serial_no = result.serial_no;
      if (result.status == AppendStatus::Invalid && !result.validation.violations.empty()) {
        outcome.message = result.validation.violations.front().message;
      } else if (result.status != AppendStatus::Accepted) {
        outcome.message = std::string(to_token(result.status));
      }
    } catch (const ParseError& e) {
      outcome.status = AppendStatus::Invalid;
      outcome.message = e.what();
    }
    if (outcome.status == AppendStatus::Accepted) {
      ++report.accepted;
    } else {
      ++report.rejected;
    }
    report.rows.push_back(std::move(outcome));
  }
  return report;
}

std::size_t Store::export_csv(const QueryFilter& filter, const std::string& path) const {
  const auto selected = query(filter);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw std::runtime_error("cannot open CSV file for writing: " + path);
  }
  std::vector<IncidentRecord> records;
  records.reserve(selected.size());
  for (const auto& entry : selected) records.push_back(entry.record);
  write_csv(out, records);
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("CSV export failed: " + path);
  }
  return records.size();
}

} // namespace aiir
