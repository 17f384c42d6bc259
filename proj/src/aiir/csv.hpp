#pragma once

// CSV exchange format for incident records.
//
// The column set and header spelling below are a compatibility contract with
// existing regulator-side tooling: emitted files must reproduce the header
// byte-for-byte, and ingestion accepts exactly these columns (matched after
// token normalization, so "S.No" and "S_NO" are the same key).

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "aiir/incident.hpp"

namespace aiir {

// Canonical header line, without a trailing newline.
extern const char* const kCsvHeader;

// Column names in emission order.
const std::vector<std::string>& csv_columns();

// The 15 cell values of a record in column order (serial first).
std::vector<std::string> csv_fields(const IncidentRecord& record);

// The 14 business fields (everything except the serial number) in column
// order. This is the content identity of a record: the dedup hash is computed
// over exactly this sequence.
std::vector<std::string> canonical_fields(const IncidentRecord& record);

// Serializes one record as a CSV line (no trailing newline). Cells containing
// commas, quotes or newlines are quoted.
std::string csv_line(const IncidentRecord& record);

// Writes the header plus one line per record.
void write_csv(std::ostream& out, const std::vector<IncidentRecord>& records);

// Splits one CSV line into raw cells, honoring double-quoted cells with ""
// escapes. Throws ParseError on unterminated quotes.
std::vector<std::string> split_csv_line(const std::string& line);

// Reads a full CSV document: validates the header, parses each row into a
// record, and validates regions against `regions`. Rows must have exactly as
// many cells as the header. Blank lines are skipped. Throws ParseError with
// 1-based line numbers in the message on any malformed input.
std::vector<IncidentRecord> read_csv(std::istream& in,
                                     const RegionDomain& regions = RegionDomain::builtin());

} // namespace aiir
