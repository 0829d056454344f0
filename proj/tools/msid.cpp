// msid: multiscale transfer-entropy decomposition for Gaussian VAR processes.
//
//   msid theoretical --scenario d --scales 1:12
//   msid simulate --scenario b --samples 20000 --seed 7 --out data.csv
//   msid decompose --input data.csv --sources 2,3 --order auto --scales 1:12

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "msid/app.hpp"
#include "msid/csv.hpp"
#include "msid/error.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kPartialFailure = 2, kIoFailure = 3 };

struct Flags {
  std::string scales = "1:12";
  std::string filter_kind = "hamming";
  std::string units = "nats";
  std::string out;
};

// Config files use the flag names as flat keys. CLI11 reads config at the top
// level only, so flat keys are filed under whichever subcommand was invoked.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App& app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    const auto active = app_.get_subcommands();
    if (active.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {active.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App& app_;
};

int exit_code_for(msid::ErrorCode code) {
  switch (code) {
    case msid::ErrorCode::kInvalidArgument:
    case msid::ErrorCode::kInvalidCutoff:
    case msid::ErrorCode::kIndexOutOfRange:
      return kUsage;
    case msid::ErrorCode::kIo:
    case msid::ErrorCode::kIngestion:
      return kIoFailure;
    default:
      return kPartialFailure;
  }
}

template <typename Writer>
int emit(const std::string& path, Writer&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return std::cout ? kOk : kIoFailure;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "msid: cannot write '" << path << "'\n";
    return kIoFailure;
  }
  write(out);
  out.close();
  return out ? kOk : kIoFailure;
}

void add_model_options(CLI::App* sub, msid::RunConfig& cfg) {
  sub->add_option("--scenario", cfg.scenario, "Benchmark configuration a, b, c or d")
      ->check(CLI::IsMember({"a", "b", "c", "d"}));
  sub->add_option("--model", cfg.model_path, "VAR model file (JSON)");
}

void add_decomposition_options(CLI::App* sub, msid::RunConfig& cfg, Flags& flags) {
  sub->add_option("--target", cfg.target, "Target channel(s): label or 1-based index, comma separated");
  sub->add_option("--sources", cfg.sources, "Source pair 'i,k'");
  sub->add_option("--scales", flags.scales, "Scale range a:b (inclusive)")->capture_default_str();
  sub->add_option("--filter-order", cfg.filter_order, "FIR filter order q")->capture_default_str();
  sub->add_option("--filter-kind", flags.filter_kind, "hamming, ma or identity")
      ->check(CLI::IsMember({"hamming", "ma", "identity"}))
      ->capture_default_str();
  sub->add_option("--units", flags.units, "nats or bits")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  sub->add_option("--jobs", cfg.jobs, "Worker threads over scales")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale interaction and partial information decomposition of transfer entropy"};
  app.require_subcommand(1);

  msid::RunConfig cfg;
  Flags flags;

  auto* theoretical = app.add_subcommand("theoretical", "Exact decomposition from VAR parameters");
  add_model_options(theoretical, cfg);
  add_decomposition_options(theoretical, cfg, flags);

  auto* simulate = app.add_subcommand("simulate", "Write a simulated realization as CSV");
  add_model_options(simulate, cfg);
  simulate->add_option("--samples", cfg.samples, "Number of samples")->capture_default_str();
  simulate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "Estimate a VAR from CSV data and decompose");
  decompose->add_option("--input", cfg.input_path, "Input CSV (header row, one column per channel)")
      ->required();
  decompose->add_option("--order", cfg.order, "VAR order or 'auto' (BIC)")->capture_default_str();
  decompose->add_option("--order-max", cfg.order_max, "Largest order tried by BIC")
      ->capture_default_str();
  add_decomposition_options(decompose, cfg, flags);

  for (auto* sub : {theoretical, simulate, decompose}) {
    sub->add_option("--out", flags.out, "Output CSV (default: stdout)");
    sub->fallthrough();
  }
  app.set_config("--config", "", "Config file (TOML or INI); keys are the long flag names");
  app.config_formatter(std::make_shared<SubcommandConfig>(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.scales = msid::parse_scale_range(flags.scales);
    cfg.filter_kind = msid::parse_filter_kind(flags.filter_kind);
    cfg.units = msid::parse_units(flags.units);

    if (simulate->parsed()) {
      cfg.command = msid::Command::kSimulate;
      const msid::TimeSeries series = msid::run_simulate(cfg);
      return emit(flags.out, [&](std::ostream& os) { msid::write_series_csv(series, os); });
    }

    cfg.command = theoretical->parsed() ? msid::Command::kTheoretical : msid::Command::kDecompose;
    const msid::ResultTable table = cfg.command == msid::Command::kTheoretical
                                        ? msid::run_theoretical(cfg)
                                        : msid::run_decompose(cfg);
    if (table.model_order) std::cerr << "msid: VAR order " << *table.model_order << '\n';
    const int written =
        emit(flags.out, [&](std::ostream& os) { msid::write_result_csv(table, cfg.units, os); });
    if (written != kOk) return written;
    for (const auto& row : table.rows) {
      if (!row.values) {
        std::cerr << "msid: scale " << row.scale << ", target " << row.target << ": " << row.status
                  << '\n';
      }
    }
    return table.all_ok() ? kOk : kPartialFailure;
  } catch (const msid::Error& e) {
    std::cerr << "msid: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}
