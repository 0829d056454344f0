#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msid/infodyn.hpp"
#include "msid/mscale.hpp"
#include "msid/var.hpp"

namespace msid {

enum class Command { kTheoretical, kSimulate, kDecompose };
enum class Units { kNats, kBits };

Units parse_units(const std::string& text);

struct ScaleRange {
  int first = 1;
  int last = 12;
};

// "a:b" (inclusive) or a single integer.
ScaleRange parse_scale_range(const std::string& text);

/// Settings shared by the three workflows. Channel references are header
/// labels or 1-based indices.
struct RunConfig {
  Command command = Command::kTheoretical;
  std::string scenario;  // a, b, c or d
  std::string model_path;
  std::string input_path;
  std::string target;   // empty: workflow default
  std::string sources;  // "i,k"; empty: workflow default
  ScaleRange scales;
  int filter_order = 12;
  FilterKind filter_kind = FilterKind::kHamming;
  std::string order = "auto";  // integer or "auto"
  int order_max = 20;
  Units units = Units::kNats;
  std::uint64_t seed = 1;
  int samples = 10000;
  int jobs = 1;
};

struct ResultRow {
  int scale = 1;
  std::string target;
  std::string source_first;
  std::string source_second;
  std::optional<TeDecomposition> values;  // empty when the scale failed
  std::string status = "ok";
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::optional<int> model_order;  // order used by `decompose`

  bool all_ok() const;
};

/// Resolves a channel reference against labels: an exact label match wins,
/// otherwise a 1-based index. Returns the 0-based channel.
int resolve_channel(const std::string& ref, const std::vector<std::string>& labels);

ResultTable run_theoretical(const RunConfig& cfg);
TimeSeries run_simulate(const RunConfig& cfg);
ResultTable run_decompose(const RunConfig& cfg);

/// Decomposes every (target, scale) combination of a fixed model. Rows are
/// ordered by scale, then by target position in `targets`, whatever the
/// number of worker threads.
ResultTable decompose_grid(const VarParams& var, const std::vector<std::string>& labels,
                           SourcePair sources, const std::vector<int>& targets,
                           const std::vector<ScaleSpec>& scales, int jobs);

// Header: scale,target,source_i,source_k,T_i,T_k,T_jk,I,U_i,U_k,R,S,status
void write_result_csv(const ResultTable& table, Units units, std::ostream& out);

}  // namespace msid
