#include "aiir/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aiir/rng.hpp"

namespace aiir {

SeedSet::SeedSet(std::vector<IncidentRecord> records) : records_(std::move(records)) {
  if (records_.empty()) {
    throw std::invalid_argument("seed set must not be empty");
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const ValidationReport report = validate_record(records_[i], ValidationMode::Strict);
    if (!report.ok) {
      throw std::invalid_argument("seed record " + std::to_string(i + 1) +
                                  " fails strict validation: " + report.violations.front().message);
    }
  }
}

const SeedSet& SeedSet::builtin() {
  static const SeedSet seeds = [] {
    auto row = [](std::uint64_t serial, InstrumentCategory instrument, const char* region,
                  double total_buy, double total_sell, double ai_buy, double ai_sell,
                  double price, double vol30, bool impact, bool issue, AISystemCategory system,
                  IncidentPattern pattern, bool oversight, bool fail_safe) {
      IncidentRecord r;
      r.serial_no = serial;
      r.instrument_category = instrument;
      r.market_region = region;
      r.total_buy_volume_pct = total_buy;
      r.total_sell_volume_pct = total_sell;
      r.ai_buy_volume_pct = ai_buy;
      r.ai_sell_volume_pct = ai_sell;
      r.price_range_pct = price;
      r.volume_vs_30d = VolumeVs30d::exact(vol30);
      r.market_impact_detected = impact;
      r.issue_flag = issue;
      r.ai_system_category = system;
      r.incident_pattern = pattern;
      r.human_oversight_involved = oversight;
      r.fail_safe_triggered = fail_safe;
      return r;
    };
    std::vector<IncidentRecord> rows;
    rows.push_back(row(1, InstrumentCategory::Derv, "EMEA", 12.8, 11.1, 6.9, 5.6, 14.5, 135.7,
                       true, false, AISystemCategory::SmartOrderRouting,
                       IncidentPattern::InformationAdvantage, false, false));
    rows.push_back(row(2, InstrumentCategory::Cmdty, "APAC", 9.5, 10.9, 7.8, 6.3, 9.3, 91.3,
                       false, true, AISystemCategory::PortfolioOptimization,
                       IncidentPattern::MomentumIgnition, true, true));
    rows.push_back(row(3, InstrumentCategory::Bnd, "AMER", 10.2, 9.8, 8.5, 7.2, 12.8, 115.5,
                       true, false, AISystemCategory::AlgorithmicTrading,
                       IncidentPattern::SentimentDriven, false, false));
    rows.push_back(row(4, InstrumentCategory::Equity, "EMEA", 11.9, 10.7, 7.1, 6.4, 13.9, 126.9,
                       false, true, AISystemCategory::PredictionBasedTrading,
                       IncidentPattern::Arbitrage, true, true));
    return SeedSet(std::move(rows));
  }();
  return seeds;
}

namespace {

double clamp_percent(double v) { return std::clamp(v, 0.0, 100.0); }

double clamp_nonnegative(double v) { return std::max(v, 0.0); }

void check_config(const SynthConfig& config) {
  if (config.n < 1) {
    throw std::invalid_argument("synth config: n must be >= 1");
  }
  if (!(config.jitter_sigma >= 0.0) || !std::isfinite(config.jitter_sigma)) {
    throw std::invalid_argument("synth config: jitter_sigma must be finite and >= 0");
  }
  if (!(config.categorical_mutation_rate >= 0.0) || !(config.categorical_mutation_rate <= 1.0)) {
    throw std::invalid_argument("synth config: categorical_mutation_rate must be in [0,1]");
  }
}

} // namespace

std::vector<IncidentRecord> synthesize(const SeedSet& seeds, const SynthConfig& config,
                                       const RegionDomain& regions) {
  check_config(config);
  const auto& basis = seeds.records();
  const auto& region_tokens = regions.tokens();
  Rng rng(config.seed);

  std::vector<IncidentRecord> out;
  out.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const std::size_t pick = config.seed_selection == SeedSelection::RoundRobin
                                 ? i % basis.size()
                                 : rng.next_index(basis.size());
    IncidentRecord r = basis[pick];
    r.serial_no = i + 1;

    const double sigma = config.jitter_sigma;
    r.total_buy_volume_pct = clamp_percent(r.total_buy_volume_pct + sigma * rng.next_normal());
    r.total_sell_volume_pct = clamp_percent(r.total_sell_volume_pct + sigma * rng.next_normal());
    r.ai_buy_volume_pct = clamp_percent(r.ai_buy_volume_pct + sigma * rng.next_normal());
    r.ai_sell_volume_pct = clamp_percent(r.ai_sell_volume_pct + sigma * rng.next_normal());
    r.price_range_pct = clamp_nonnegative(r.price_range_pct + sigma * rng.next_normal());
    const double volume_noise = sigma * rng.next_normal();
    if (!r.volume_vs_30d.is_bucket()) {
      r.volume_vs_30d =
          VolumeVs30d::exact(clamp_nonnegative(r.volume_vs_30d.exact_value() + volume_noise));
    }

    const double rate = config.categorical_mutation_rate;
    auto mutate = [&rng, rate](auto& field, const auto& levels) {
      if (rng.next_double() < rate) {
        field = levels[rng.next_index(levels.size())];
      }
    };
    mutate(r.instrument_category, all_instrument_categories());
    if (!config.region_neutral) {
      mutate(r.market_region, region_tokens);
    }
    auto mutate_bool = [&rng, rate](bool& field) {
      if (rng.next_double() < rate) {
        field = rng.next_index(2) == 0;
      }
    };
    mutate_bool(r.market_impact_detected);
    mutate_bool(r.issue_flag);
    mutate(r.ai_system_category, all_ai_system_categories());
    mutate(r.incident_pattern, all_incident_patterns());
    mutate_bool(r.human_oversight_involved);
    mutate_bool(r.fail_safe_triggered);

    if (config.region_neutral) {
      r.market_region = region_tokens[rng.next_index(region_tokens.size())];
    }

    // Ordering repair: jitter may push an AI percent past its firm total.
    r.ai_buy_volume_pct = std::min(r.ai_buy_volume_pct, r.total_buy_volume_pct);
    r.ai_sell_volume_pct = std::min(r.ai_sell_volume_pct, r.total_sell_volume_pct);

    // Injected effects land after the repair so the configured shift survives
    // intact; firm totals are lifted to keep AI <= Total.
    auto inject = [&r, &config](const std::string& level) {
      const auto it = config.effect_injection.find(level);
      if (it == config.effect_injection.end()) return;
      r.ai_buy_volume_pct = clamp_percent(r.ai_buy_volume_pct + it->second.ai_buy);
      r.ai_sell_volume_pct = clamp_percent(r.ai_sell_volume_pct + it->second.ai_sell);
      r.total_buy_volume_pct = std::max(r.total_buy_volume_pct, r.ai_buy_volume_pct);
      r.total_sell_volume_pct = std::max(r.total_sell_volume_pct, r.ai_sell_volume_pct);
    };
    if (!config.effect_injection.empty()) {
      inject(std::string(to_token(r.ai_system_category)));
      inject(r.market_region);
    }

    out.push_back(std::move(r));
  }
  return out;
}

namespace {

NumericSummary summarize(const std::vector<double>& values) {
  NumericSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

} // namespace

MarginalSummary marginal_summary(const std::vector<IncidentRecord>& records,
                                 const RegionDomain& regions) {
  if (records.empty()) {
    throw std::invalid_argument("marginal_summary requires a non-empty record list");
  }
  MarginalSummary summary;

  std::map<std::string, std::vector<double>> columns;
  for (const auto& r : records) {
    columns["total_buy_volume_pct"].push_back(r.total_buy_volume_pct);
    columns["total_sell_volume_pct"].push_back(r.total_sell_volume_pct);
    columns["ai_buy_volume_pct"].push_back(r.ai_buy_volume_pct);
    columns["ai_sell_volume_pct"].push_back(r.ai_sell_volume_pct);
    columns["price_range_pct"].push_back(r.price_range_pct);
    if (r.volume_vs_30d.is_bucket()) {
      ++summary.bucketed_volume_rows;
    } else {
      columns["volume_vs_30d_avg_pct"].push_back(r.volume_vs_30d.exact_value());
    }
  }
  for (const auto& [name, values] : columns) {
    summary.numeric[name] = summarize(values);
  }

  auto count_levels = [&records, &summary](const std::string& field, const auto& levels,
                                           auto&& token_of) {
    std::vector<std::pair<std::string, std::size_t>> counts;
    for (const auto& level : levels) {
      counts.emplace_back(std::string(level), 0);
    }
    for (const auto& r : records) {
      const std::string token = token_of(r);
      for (auto& [name, count] : counts) {
        if (name == token) {
          ++count;
          break;
        }
      }
    }
    summary.frequencies[field] = std::move(counts);
  };

  auto tokens_of = [](const auto& values) {
    std::vector<std::string> tokens;
    for (const auto& v : values) tokens.emplace_back(to_token(v));
    return tokens;
  };

  count_levels("instrument_category", tokens_of(all_instrument_categories()),
               [](const IncidentRecord& r) { return std::string(to_token(r.instrument_category)); });
  count_levels("market_region", regions.tokens(),
               [](const IncidentRecord& r) { return r.market_region; });
  count_levels("ai_system_category", tokens_of(all_ai_system_categories()),
               [](const IncidentRecord& r) { return std::string(to_token(r.ai_system_category)); });
  count_levels("incident_pattern", tokens_of(all_incident_patterns()),
               [](const IncidentRecord& r) { return std::string(to_token(r.incident_pattern)); });
  const std::vector<std::string> yes_no_levels = {"YES", "NO"};
  count_levels("market_impact_detected", yes_no_levels,
               [](const IncidentRecord& r) { return std::string(yes_no(r.market_impact_detected)); });
  count_levels("issue_flag", yes_no_levels,
               [](const IncidentRecord& r) { return std::string(yes_no(r.issue_flag)); });
  count_levels("human_oversight_involved", yes_no_levels, [](const IncidentRecord& r) {
    return std::string(yes_no(r.human_oversight_involved));
  });
  count_levels("fail_safe_triggered", yes_no_levels,
               [](const IncidentRecord& r) { return std::string(yes_no(r.fail_safe_triggered)); });

  return summary;
}

} // namespace aiir
