#include <doctest.h>

#include <fstream>
#include <sstream>

#include "aiir/csv.hpp"
#include "fixtures.hpp"

using namespace aiir;

namespace {

const char* kExpectedHeader =
    "S.No, Instrument_Category, Market_Region, Total_Buy_Volume_Pct, Total_Sell_Volume_Pct, "
    "AI_Buy_Volume_Pct, AI_Sell_Volume_Pct, Price_Range_Pct, Volume_vs_30D_Avg_Pct, "
    "Market_Impact_Detected, Issue_Flag, AI_System_Category, Incident_Pattern, "
    "Human_oversight_involved, Fail_Safe_Triggered";

std::string sample_csv_path() {
  return std::string(AIIR_SOURCE_DIR) + "/data/sample_incidents.csv";
}

} // namespace

TEST_CASE("header is the canonical 15-column line") {
  CHECK(std::string(kCsvHeader) == kExpectedHeader);
  CHECK(csv_columns().size() == 15);
  CHECK(csv_columns().front() == "S.No");
  CHECK(csv_columns().back() == "Fail_Safe_Triggered");
}

TEST_CASE("csv_line serializes the fixture row") {
  auto r = fixtures::valid_record();
  r.serial_no = 1;
  CHECK(csv_line(r) ==
        "1, DERV, EMEA, 12.8, 11.1, 6.9, 5.6, 14.5, 135.7, YES, NO, SMART_ORDER_ROUTING, "
        "PATTERN_INFORMATION_ADVANTAGE, NO, NO");
}

TEST_CASE("split_csv_line honors quotes and escapes") {
  CHECK(split_csv_line("a, b, c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("a,\"b, c\",d") == std::vector<std::string>{"a", "b, c", "d"});
  CHECK(split_csv_line("\"he said \"\"hi\"\"\"") ==
        std::vector<std::string>{"he said \"hi\""});
  CHECK(split_csv_line("") == std::vector<std::string>{""});
  CHECK_THROWS_AS(split_csv_line("\"unterminated"), ParseError);
}

TEST_CASE("sample data file round-trips byte-identically") {
  std::ifstream in(sample_csv_path(), std::ios::binary);
  REQUIRE(in.is_open());
  std::stringstream original;
  original << in.rdbuf();

  std::istringstream parse_input(original.str());
  const auto records = read_csv(parse_input);
  REQUIRE(records.size() == 4);
  for (const auto& record : records) {
    CHECK(validate_record(record, ValidationMode::Strict).ok);
  }

  std::ostringstream emitted;
  write_csv(emitted, records);
  CHECK(emitted.str() == original.str());
}

TEST_CASE("read_csv validates the header") {
  std::istringstream in("S.No, Wrong_Column\n");
  CHECK_THROWS_AS(read_csv(in), ParseError);
}

TEST_CASE("read_csv accepts a normalized header spelling") {
  std::string body =
      "s_no, instrument_category, market_region, total_buy_volume_pct, total_sell_volume_pct, "
      "ai_buy_volume_pct, ai_sell_volume_pct, price_range_pct, volume_vs_30d_avg_pct, "
      "market_impact_detected, issue_flag, ai_system_category, incident_pattern, "
      "human_oversight_involved, fail_safe_triggered\n"
      "1, EQTY, APAC, 10, 10, 5, 5, 6, 100, NO, NO, ALGORITHMIC_TRADING, PATTERN_ARBITRAGE, "
      "YES, NO\n";
  std::istringstream in(body);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].instrument_category == InstrumentCategory::Equity);
}

TEST_CASE("read_csv reports the 1-based line of a bad row") {
  std::string body = std::string(kCsvHeader) + "\n" +
                     "1, DERV, EMEA, 12.8, 11.1, 6.9, 5.6, 14.5, 135.7, YES, NO, "
                     "SMART_ORDER_ROUTING, PATTERN_INFORMATION_ADVANTAGE, NO, NO\n" +
                     "2, DERV, EMEA, bogus, 11.1, 6.9, 5.6, 14.5, 135.7, YES, NO, "
                     "SMART_ORDER_ROUTING, PATTERN_INFORMATION_ADVANTAGE, NO, NO\n";
  std::istringstream in(body);
  try {
    read_csv(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("read_csv rejects rows with the wrong cell count") {
  std::string body = std::string(kCsvHeader) + "\n1, DERV, EMEA\n";
  std::istringstream in(body);
  CHECK_THROWS_AS(read_csv(in), ParseError);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  std::string body = std::string(kCsvHeader) + "\r\n\r\n" +
                     "1, CMDTY, APAC, 9.5, 10.9, 7.8, 6.3, 9.3, 91.3, NO, YES, "
                     "PORTFOLIO_OPTIMIZATION, PATTERN_MOMENTUM_IGNITION, YES, YES\r\n";
  std::istringstream in(body);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].instrument_category == InstrumentCategory::Cmdty);
  CHECK(records[0].market_region == "APAC");
}

TEST_CASE("canonical_fields excludes the serial number") {
  auto r = fixtures::valid_record();
  r.serial_no = 7;
  const auto canonical = canonical_fields(r);
  CHECK(canonical.size() == 14);
  CHECK(canonical.front() == "DERV");
  r.serial_no = 8;
  CHECK(canonical_fields(r) == canonical);
}

TEST_CASE("bucketed volume serializes as its label") {
  auto r = fixtures::valid_record();
  r.volume_vs_30d = VolumeVs30d::bucket("100-200%");
  const auto fields = csv_fields(r);
  CHECK(fields.at(8) == "100-200%");
  std::ostringstream out;
  write_csv(out, {r});
  std::istringstream in(out.str());
  const auto records = read_csv(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].volume_vs_30d.is_bucket());
  CHECK(records[0] == r);
}
