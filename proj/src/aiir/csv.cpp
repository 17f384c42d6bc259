#include "aiir/csv.hpp"

#include <map>
#include <sstream>

#include "aiir/text.hpp"

namespace aiir {

const char* const kCsvHeader =
    "S.No, Instrument_Category, Market_Region, Total_Buy_Volume_Pct, Total_Sell_Volume_Pct, "
    "AI_Buy_Volume_Pct, AI_Sell_Volume_Pct, Price_Range_Pct, Volume_vs_30D_Avg_Pct, "
    "Market_Impact_Detected, Issue_Flag, AI_System_Category, Incident_Pattern, "
    "Human_oversight_involved, Fail_Safe_Triggered";

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "S.No",
      "Instrument_Category",
      "Market_Region",
      "Total_Buy_Volume_Pct",
      "Total_Sell_Volume_Pct",
      "AI_Buy_Volume_Pct",
      "AI_Sell_Volume_Pct",
      "Price_Range_Pct",
      "Volume_vs_30D_Avg_Pct",
      "Market_Impact_Detected",
      "Issue_Flag",
      "AI_System_Category",
      "Incident_Pattern",
      "Human_oversight_involved",
      "Fail_Safe_Triggered",
  };
  return columns;
}

std::vector<std::string> canonical_fields(const IncidentRecord& r) {
  return {
      std::string(to_token(r.instrument_category)),
      r.market_region,
      format_double(r.total_buy_volume_pct),
      format_double(r.total_sell_volume_pct),
      format_double(r.ai_buy_volume_pct),
      format_double(r.ai_sell_volume_pct),
      format_double(r.price_range_pct),
      r.volume_vs_30d.to_text(),
      std::string(yes_no(r.market_impact_detected)),
      std::string(yes_no(r.issue_flag)),
      std::string(to_token(r.ai_system_category)),
      std::string(to_token(r.incident_pattern)),
      std::string(yes_no(r.human_oversight_involved)),
      std::string(yes_no(r.fail_safe_triggered)),
  };
}

std::vector<std::string> csv_fields(const IncidentRecord& r) {
  std::vector<std::string> fields;
  fields.reserve(15);
  fields.push_back(std::to_string(r.serial_no));
  for (auto& f : canonical_fields(r)) fields.push_back(std::move(f));
  return fields;
}

namespace {

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) {
    return cell;
  }
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

} // namespace

std::string csv_line(const IncidentRecord& record) {
  std::string line;
  bool first = true;
  for (const auto& cell : csv_fields(record)) {
    if (!first) line += ", ";
    first = false;
    line += quote_if_needed(cell);
  }
  return line;
}

void write_csv(std::ostream& out, const std::vector<IncidentRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_line(r) << '\n';
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && trim(cell).empty()) {
      in_quotes = true;
      cell.clear();
    } else if (c == ',') {
      cells.push_back(std::string(trim(cell)));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (in_quotes) {
    throw ParseError("csv", line, "unterminated quoted cell");
  }
  cells.push_back(std::string(trim(cell)));
  return cells;
}

std::vector<IncidentRecord> read_csv(std::istream& in, const RegionDomain& regions) {
  std::string line;
  std::size_t line_no = 0;

  // Header: read the first non-blank line and check the column set.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) {
    throw ParseError("csv", "", "empty document: expected a header line");
  }
  const auto& columns = csv_columns();
  if (header.size() != columns.size()) {
    throw ParseError("csv", line,
                     "header has " + std::to_string(header.size()) + " columns, expected " +
                         std::to_string(columns.size()));
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (normalize_token(header[i]) != normalize_token(columns[i])) {
      throw ParseError("csv", header[i],
                       "unexpected header column '" + header[i] + "' at position " +
                           std::to_string(i + 1) + ", expected '" + columns[i] + "'");
    }
  }

  std::vector<IncidentRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != columns.size()) {
      throw ParseError("csv", line,
                       "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(columns.size()));
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      row[columns[i]] = cells[i];
    }
    try {
      records.push_back(parse_record(row, regions));
    } catch (const ParseError& e) {
      throw ParseError(e.field(), e.value(),
                       "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

} // namespace aiir
