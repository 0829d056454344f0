#include "msid/app.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "msid/csv.hpp"
#include "msid/error.hpp"

namespace msid {

namespace {

int parse_int(const std::string& text, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid ") + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

SourcePair resolve_sources(const std::string& text, const std::vector<std::string>& labels) {
  const auto refs = split_list(text);
  if (refs.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "--sources expects two channels 'i,k'");
  }
  SourcePair pair{resolve_channel(refs[0], labels), resolve_channel(refs[1], labels)};
  if (pair.first == pair.second) throw Error(ErrorCode::kInvalidArgument, "sources must differ");
  return pair;
}

std::vector<int> resolve_targets(const std::string& text, const std::vector<std::string>& labels,
                                 SourcePair sources) {
  std::vector<int> targets;
  if (text.empty()) {
    for (int c = 0; c < static_cast<int>(labels.size()); ++c) {
      if (c != sources.first && c != sources.second) targets.push_back(c);
    }
  } else {
    for (const auto& ref : split_list(text)) targets.push_back(resolve_channel(ref, labels));
  }
  for (int t : targets) {
    if (t == sources.first || t == sources.second) {
      throw Error(ErrorCode::kInvalidArgument, "target '" + labels[t] + "' is also a source");
    }
  }
  if (targets.empty()) throw Error(ErrorCode::kInvalidArgument, "no target channels");
  return targets;
}

VarParams model_from_config(const RunConfig& cfg) {
  if (!cfg.model_path.empty()) return read_model(cfg.model_path);
  if (cfg.scenario.size() == 1) return build_scenario(ScenarioConfig::preset(cfg.scenario[0]));
  if (cfg.scenario.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "either --scenario or --model is required");
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario '" + cfg.scenario + "'");
}

std::vector<ScaleSpec> scales_from_config(const RunConfig& cfg) {
  return scale_sweep(cfg.scales.first, cfg.scales.last, cfg.filter_order, cfg.filter_kind);
}

}  // namespace

Units parse_units(const std::string& text) {
  if (text == "nats") return Units::kNats;
  if (text == "bits") return Units::kBits;
  throw Error(ErrorCode::kInvalidArgument, "unknown units '" + text + "', expected nats or bits");
}

ScaleRange parse_scale_range(const std::string& text) {
  ScaleRange range;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    range.first = range.last = parse_int(text, "scale");
  } else {
    range.first = parse_int(text.substr(0, colon), "scale");
    range.last = parse_int(text.substr(colon + 1), "scale");
  }
  if (range.first < 1 || range.last < range.first) {
    throw Error(ErrorCode::kInvalidArgument, "scale range '" + text + "' must satisfy 1 <= a <= b");
  }
  return range;
}

bool ResultTable::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.values.has_value(); });
}

int resolve_channel(const std::string& ref, const std::vector<std::string>& labels) {
  const auto it = std::find(labels.begin(), labels.end(), ref);
  if (it != labels.end()) return static_cast<int>(it - labels.begin());
  int index = 0;
  const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), index);
  if (ref.empty() || ec != std::errc() || ptr != ref.data() + ref.size() || index < 1 ||
      index > static_cast<int>(labels.size())) {
    throw Error(ErrorCode::kInvalidArgument, "unknown channel '" + ref + "'");
  }
  return index - 1;
}

ResultTable decompose_grid(const VarParams& var, const std::vector<std::string>& labels,
                           SourcePair sources, const std::vector<int>& targets,
                           const std::vector<ScaleSpec>& scales, int jobs) {
  std::vector<ScaleSpec> ordered = scales;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ScaleSpec& a, const ScaleSpec& b) { return a.tau < b.tau; });

  ResultTable table;
  if (ordered.empty()) return table;

  std::vector<std::vector<ResultRow>> per_scale(ordered.size());
  auto run_scale = [&](std::size_t s) {
    const ScaleSpec& spec = ordered[s];
    auto& rows = per_scale[s];
    for (int t : targets) {
      rows.push_back({spec.tau, labels[t], labels[sources.first], labels[sources.second], {}, "ok"});
    }
    IssParams iss;
    try {
      iss = rescale(var, spec);
    } catch (const Error& e) {
      for (auto& row : rows) row.status = to_string(e.code());
      return;
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
      try {
        rows[i].values = decompose(iss, sources, targets[i], spec.tau);
      } catch (const Error& e) {
        rows[i].status = to_string(e.code());
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, ordered.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < ordered.size(); s = next++) run_scale(s);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (auto& rows : per_scale) {
    for (auto& row : rows) table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_theoretical(const RunConfig& cfg) {
  const VarParams var = model_from_config(cfg);
  const auto labels = default_labels(var.channels());
  const SourcePair sources = resolve_sources(cfg.sources.empty() ? "2,3" : cfg.sources, labels);
  const std::string target = cfg.target.empty() && cfg.model_path.empty() ? "4" : cfg.target;
  const auto targets = resolve_targets(target, labels, sources);
  return decompose_grid(var, labels, sources, targets, scales_from_config(cfg), cfg.jobs);
}

TimeSeries run_simulate(const RunConfig& cfg) {
  if (cfg.samples < 1) throw Error(ErrorCode::kInvalidArgument, "--samples must be >= 1");
  return simulate(model_from_config(cfg), cfg.samples, cfg.seed);
}

ResultTable run_decompose(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--input is required");
  if (cfg.sources.empty()) throw Error(ErrorCode::kInvalidArgument, "--sources is required");
  const TimeSeries data = read_series_csv(cfg.input_path);
  if (data.channels() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "decompose needs at least 3 channels");
  }
  const SourcePair sources = resolve_sources(cfg.sources, data.labels);
  const auto targets = resolve_targets(cfg.target, data.labels, sources);

  const int order = cfg.order == "auto" ? select_order_bic(data, cfg.order_max).order
                                        : parse_int(cfg.order, "order");
  const VarParams var = estimate(data, order);
  if (!is_stable(var)) {
    throw Error(ErrorCode::kUnstable,
                "estimated VAR(" + std::to_string(order) + ") is not stationary");
  }
  ResultTable table =
      decompose_grid(var, data.labels, sources, targets, scales_from_config(cfg), cfg.jobs);
  table.model_order = order;
  return table;
}

void write_result_csv(const ResultTable& table, Units units, std::ostream& out) {
  const double factor = units == Units::kBits ? 1.0 / std::numbers::ln2 : 1.0;
  out << "scale,target,source_i,source_k,T_i,T_k,T_jk,I,U_i,U_k,R,S,status\n";
  for (const ResultRow& row : table.rows) {
    out << row.scale << ',' << row.target << ',' << row.source_first << ',' << row.source_second;
    if (row.values) {
      const TeDecomposition& d = *row.values;
      for (double v : {d.te_first, d.te_second, d.te_joint, d.interaction, d.unique_first,
                       d.unique_second, d.redundancy, d.synergy}) {
        out << ',' << format_number(v * factor);
      }
    } else {
      out << ",,,,,,,,";
    }
    out << ',' << row.status << '\n';
  }
}

}  // namespace msid
