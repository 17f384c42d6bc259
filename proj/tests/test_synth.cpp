#include <doctest.h>

#include <set>

#include "aiir/csv.hpp"
#include "aiir/synth.hpp"
#include "fixtures.hpp"

using namespace aiir;

TEST_CASE("seed set construction validates strictly") {
  CHECK_THROWS_AS(SeedSet(std::vector<IncidentRecord>{}), std::invalid_argument);
  auto bad = fixtures::valid_record();
  bad.total_buy_volume_pct = 150.0;
  CHECK_THROWS_AS(SeedSet({bad}), std::invalid_argument);
  CHECK(SeedSet::builtin().records().size() == 4);
}

TEST_CASE("built-in sample rows match the published values") {
  const auto& rows = SeedSet::builtin().records();
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].instrument_category == InstrumentCategory::Derv);
  CHECK(rows[0].market_region == "EMEA");
  CHECK(rows[0].price_range_pct == 14.5);
  CHECK(rows[0].volume_vs_30d == VolumeVs30d::exact(135.7));
  CHECK(rows[1].instrument_category == InstrumentCategory::Cmdty);
  CHECK(rows[1].fail_safe_triggered);
  CHECK(rows[2].ai_system_category == AISystemCategory::AlgorithmicTrading);
  CHECK(rows[3].incident_pattern == IncidentPattern::Arbitrage);
  CHECK(rows[3].market_region == "EMEA");
}

TEST_CASE("synthesize produces exactly n strict-valid records") {
  SynthConfig config;
  config.seed = 1;
  config.n = 500;
  const auto out = synthesize(SeedSet::builtin(), config);
  REQUIRE(out.size() == 500);
  for (const auto& r : out) {
    CHECK(validate_record(r, ValidationMode::Strict).ok);
  }
}

TEST_CASE("equal seed and config reproduce byte-identical output") {
  SynthConfig config;
  config.seed = 42;
  config.n = 200;
  const auto a = synthesize(SeedSet::builtin(), config);
  const auto b = synthesize(SeedSet::builtin(), config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(csv_line(a[i]) == csv_line(b[i]));
  }
  config.seed = 43;
  const auto c = synthesize(SeedSet::builtin(), config);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) any_diff = any_diff || !(a[i] == c[i]);
  CHECK(any_diff);
}

TEST_CASE("round-robin selection cycles the seed rows in order") {
  SynthConfig config;
  config.seed = 5;
  config.n = 8;
  config.seed_selection = SeedSelection::RoundRobin;
  config.jitter_sigma = 0.0;
  config.categorical_mutation_rate = 0.0;
  const auto out = synthesize(SeedSet::builtin(), config);
  const auto& seeds = SeedSet::builtin().records();
  REQUIRE(out.size() == 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].instrument_category == seeds[i % 4].instrument_category);
    CHECK(out[i].market_region == seeds[i % 4].market_region);
  }
}

TEST_CASE("zero jitter and zero mutation copy the seeds verbatim") {
  SynthConfig config;
  config.seed = 11;
  config.n = 12;
  config.seed_selection = SeedSelection::RoundRobin;
  config.jitter_sigma = 0.0;
  config.categorical_mutation_rate = 0.0;
  const auto out = synthesize(SeedSet::builtin(), config);
  const auto& seeds = SeedSet::builtin().records();
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].serial_no == i + 1); // serials are assigned fresh
    IncidentRecord expected = seeds[i % 4];
    expected.serial_no = out[i].serial_no;
    CHECK(out[i] == expected);
  }
}

TEST_CASE("numeric fields stay inside their domains under heavy jitter") {
  SynthConfig config;
  config.seed = 3;
  config.n = 2000;
  config.jitter_sigma = 50.0; // force clamping
  const auto out = synthesize(SeedSet::builtin(), config);
  for (const auto& r : out) {
    CHECK(r.total_buy_volume_pct >= 0.0);
    CHECK(r.total_buy_volume_pct <= 100.0);
    CHECK(r.ai_buy_volume_pct <= r.total_buy_volume_pct + kPercentTolerance);
    CHECK(r.ai_sell_volume_pct <= r.total_sell_volume_pct + kPercentTolerance);
    CHECK(r.price_range_pct >= 0.0);
    if (!r.volume_vs_30d.is_bucket()) CHECK(r.volume_vs_30d.exact_value() >= 0.0);
  }
}

TEST_CASE("mutation rate 1 resamples every categorical eventually") {
  SynthConfig config;
  config.seed = 9;
  config.n = 3000;
  config.categorical_mutation_rate = 1.0;
  const auto out = synthesize(SeedSet::builtin(), config);
  std::set<InstrumentCategory> instruments;
  std::set<AISystemCategory> systems;
  std::set<IncidentPattern> patterns;
  std::set<std::string> regions;
  for (const auto& r : out) {
    instruments.insert(r.instrument_category);
    systems.insert(r.ai_system_category);
    patterns.insert(r.incident_pattern);
    regions.insert(r.market_region);
  }
  CHECK(instruments.size() == all_instrument_categories().size());
  CHECK(systems.size() == all_ai_system_categories().size());
  CHECK(patterns.size() == all_incident_patterns().size());
  CHECK(regions.size() == 3);
}

TEST_CASE("region_neutral draws the region independently and uniformly") {
  SynthConfig config;
  config.seed = 21;
  config.n = 3000;
  config.region_neutral = true;
  const auto out = synthesize(SeedSet::builtin(), config);
  std::map<std::string, std::size_t> counts;
  for (const auto& r : out) ++counts[r.market_region];
  REQUIRE(counts.size() == 3);
  for (const auto& [region, count] : counts) {
    // Uniform over three regions: expect ~1000 each; allow a wide band.
    CHECK(count > 800);
    CHECK(count < 1200);
  }
}

TEST_CASE("effect injection shifts the keyed level and keeps records valid") {
  SynthConfig config;
  config.seed = 13;
  config.n = 2000;
  config.effect_injection["SMART_ORDER_ROUTING"] = {10.0, 10.0};
  const auto base_config = [&] {
    SynthConfig c = config;
    c.effect_injection.clear();
    return c;
  }();
  const auto with = synthesize(SeedSet::builtin(), config);
  const auto without = synthesize(SeedSet::builtin(), base_config);
  REQUIRE(with.size() == without.size());

  double shifted_delta = 0.0, other_delta = 0.0;
  std::size_t shifted_n = 0, other_n = 0;
  for (std::size_t i = 0; i < with.size(); ++i) {
    // Same stream position, so rows pair up exactly.
    const double delta = with[i].ai_buy_volume_pct - without[i].ai_buy_volume_pct;
    if (with[i].ai_system_category == AISystemCategory::SmartOrderRouting) {
      shifted_delta += delta;
      ++shifted_n;
    } else {
      other_delta += delta;
      ++other_n;
    }
    CHECK(validate_record(with[i], ValidationMode::Strict).ok);
  }
  REQUIRE(shifted_n > 0);
  REQUIRE(other_n > 0);
  CHECK(shifted_delta / static_cast<double>(shifted_n) > 5.0); // clamping eats some of +10
  CHECK(other_delta == 0.0);
}

TEST_CASE("injection keyed by region token shifts that region only") {
  SynthConfig config;
  config.seed = 17;
  config.n = 1000;
  config.effect_injection["APAC"] = {8.0, 0.0};
  const auto out = synthesize(SeedSet::builtin(), config);
  SynthConfig base = config;
  base.effect_injection.clear();
  const auto plain = synthesize(SeedSet::builtin(), base);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].market_region != "APAC") {
      CHECK(out[i].ai_buy_volume_pct == plain[i].ai_buy_volume_pct);
    }
  }
}

TEST_CASE("config invariants are enforced") {
  SynthConfig config;
  config.n = 0;
  CHECK_THROWS_AS(synthesize(SeedSet::builtin(), config), std::invalid_argument);
  config.n = 10;
  config.jitter_sigma = -1.0;
  CHECK_THROWS_AS(synthesize(SeedSet::builtin(), config), std::invalid_argument);
  config.jitter_sigma = 1.0;
  config.categorical_mutation_rate = 1.5;
  CHECK_THROWS_AS(synthesize(SeedSet::builtin(), config), std::invalid_argument);
}

TEST_CASE("bucketed seed rows carry their bucket through jitter") {
  auto seed_row = fixtures::valid_record();
  seed_row.volume_vs_30d = VolumeVs30d::bucket("100-200%");
  SynthConfig config;
  config.seed = 2;
  config.n = 50;
  config.seed_selection = SeedSelection::RoundRobin;
  const auto out = synthesize(SeedSet({seed_row}), config);
  for (const auto& r : out) {
    REQUIRE(r.volume_vs_30d.is_bucket());
    CHECK(r.volume_vs_30d.bucket_label() == "100-200%");
  }
}

TEST_CASE("marginal summary reports moments and level frequencies") {
  const auto& rows = SeedSet::builtin().records();
  const auto summary = marginal_summary(rows);
  // price values: 14.5, 9.3, 12.8, 13.9 -> mean 12.625
  CHECK(summary.numeric.at("price_range_pct").mean == doctest::Approx(12.625).epsilon(1e-12));
  CHECK(summary.numeric.at("price_range_pct").n == 4);
  CHECK(summary.numeric.at("volume_vs_30d_avg_pct").n == 4);
  CHECK(summary.bucketed_volume_rows == 0);

  const auto& regions = summary.frequencies.at("market_region");
  REQUIRE(regions.size() == 3);
  CHECK(regions[0] == std::pair<std::string, std::size_t>{"APAC", 1});
  CHECK(regions[1] == std::pair<std::string, std::size_t>{"EMEA", 2});
  CHECK(regions[2] == std::pair<std::string, std::size_t>{"AMER", 1});

  const auto& instruments = summary.frequencies.at("instrument_category");
  REQUIRE(instruments.size() == all_instrument_categories().size());
  CHECK(instruments[0].first == "EQUITY"); // declaration order, zero counts kept
  std::size_t total = 0;
  for (const auto& [token, count] : instruments) total += count;
  CHECK(total == 4);

  const auto& impact = summary.frequencies.at("market_impact_detected");
  REQUIRE(impact.size() == 2);
  CHECK(impact[0] == std::pair<std::string, std::size_t>{"YES", 2});
  CHECK(impact[1] == std::pair<std::string, std::size_t>{"NO", 2});
}

TEST_CASE("marginal summary excludes bucketed ratios from the numeric column") {
  auto row = fixtures::valid_record();
  row.volume_vs_30d = VolumeVs30d::bucket("100-200%");
  const auto summary = marginal_summary({row, fixtures::valid_record()});
  CHECK(summary.numeric.at("volume_vs_30d_avg_pct").n == 1);
  CHECK(summary.bucketed_volume_rows == 1);
}
