#include "msid/infodyn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace msid {

namespace {

constexpr double kClampMagnitude = 1e-12;
constexpr double kNegativeTolerance = 1e-10;

void check_index(int index, int channels, const char* what) {
  if (index < 0 || index >= channels) {
    throw Error(ErrorCode::kIndexOutOfRange, std::string(what) + " index " + std::to_string(index) +
                                                 " outside [0, " + std::to_string(channels) + ")");
  }
}

IndexSet normalized(IndexSet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

Mat select_rows(const Mat& m, const IndexSet& rows) {
  Mat out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = m.row(rows[r]);
  return out;
}

Mat select_cols(const Mat& m, const IndexSet& cols) {
  Mat out(m.rows(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = m.col(cols[c]);
  return out;
}

double clamp_transfer(double value, const char* what) {
  if (value < -kNegativeTolerance) {
    throw Error(ErrorCode::kNumericalInconsistency,
                std::string(what) + " is negative (" + std::to_string(value) + " nats)");
  }
  return value < kClampMagnitude ? 0.0 : value;
}

void check_triplet(const IssParams& iss, SourcePair sources, int target) {
  const int m = iss.obs_dim();
  check_index(sources.first, m, "source");
  check_index(sources.second, m, "source");
  check_index(target, m, "target");
  if (sources.first == sources.second || sources.first == target || sources.second == target) {
    throw Error(ErrorCode::kInvalidArgument, "sources and target must be distinct channels");
  }
}

}  // namespace

double partial_variance(const IssParams& iss, int target, IndexSet cond,
                        const DareOptions& options) {
  const int m = iss.obs_dim();
  check_index(target, m, "target");
  for (int c : cond) check_index(c, m, "conditioning");
  cond = normalized(std::move(cond));
  const auto pos = std::find(cond.begin(), cond.end(), target);
  if (pos == cond.end()) {
    throw Error(ErrorCode::kInvalidArgument, "conditioning set must contain the target");
  }

  const Mat kv_all = iss.K * iss.V;
  const Mat c_sub = select_rows(iss.C, cond);
  const Mat r_sub = select_cols(select_rows(iss.V, cond), cond);
  const Mat s_sub = select_cols(kv_all, cond);
  const Mat q = kv_all * iss.K.transpose();
  const DareSolution sol = solve_dare(iss.A, c_sub, q, r_sub, s_sub, options);
  const auto k = static_cast<Eigen::Index>(pos - cond.begin());
  return sol.V(k, k);
}

double PartialVarianceSet::at(IndexSet cond) const {
  const auto it = entries.find(normalized(std::move(cond)));
  if (it == entries.end()) {
    throw Error(ErrorCode::kInvalidArgument, "partial variance not computed for this set");
  }
  return it->second;
}

double PartialVarianceSet::monotonicity_violation() const {
  double worst = 0.0;
  for (const auto& [small, small_value] : entries) {
    for (const auto& [large, large_value] : entries) {
      if (large.size() <= small.size()) continue;
      if (!std::includes(large.begin(), large.end(), small.begin(), small.end())) continue;
      worst = std::max(worst, large_value - small_value);
    }
  }
  return worst;
}

PartialVarianceSet partial_variances(const IssParams& iss, int target,
                                     const std::vector<IndexSet>& sets,
                                     const DareOptions& options) {
  PartialVarianceSet out;
  out.target = target;
  for (const IndexSet& set : sets) {
    IndexSet key = normalized(set);
    if (out.entries.contains(key)) continue;
    const double value = partial_variance(iss, target, key, options);
    out.entries.emplace(std::move(key), value);
  }
  return out;
}

double transfer_entropy(const IssParams& iss, int source, int target,
                        const DareOptions& options) {
  check_index(source, iss.obs_dim(), "source");
  if (source == target) throw Error(ErrorCode::kInvalidArgument, "source equals target");
  const double own = partial_variance(iss, target, {target}, options);
  const double with_source = partial_variance(iss, target, {source, target}, options);
  return clamp_transfer(0.5 * std::log(own / with_source), "transfer entropy");
}

double joint_transfer_entropy(const IssParams& iss, SourcePair sources, int target,
                              const DareOptions& options) {
  check_triplet(iss, sources, target);
  const double own = partial_variance(iss, target, {target}, options);
  const double joint = partial_variance(iss, target, {sources.first, sources.second, target}, options);
  return clamp_transfer(0.5 * std::log(own / joint), "joint transfer entropy");
}

TeDecomposition decompose(const IssParams& iss, SourcePair sources, int target, int scale,
                          const DareOptions& options) {
  check_triplet(iss, sources, target);
  const int i = sources.first;
  const int k = sources.second;
  const PartialVarianceSet pv =
      partial_variances(iss, target, {{target}, {i, target}, {k, target}, {i, k, target}}, options);
  const double own = pv.at({target});

  TeDecomposition d;
  d.scale = scale;
  d.target = target;
  d.sources = sources;
  d.te_first = clamp_transfer(0.5 * std::log(own / pv.at({i, target})), "transfer entropy");
  d.te_second = clamp_transfer(0.5 * std::log(own / pv.at({k, target})), "transfer entropy");
  d.te_joint = clamp_transfer(0.5 * std::log(own / pv.at({i, k, target})), "joint transfer entropy");

  // Conditioning on more sources cannot increase the prediction error, so the
  // joint transfer dominates both individual ones up to round-off.
  const double largest = std::max(d.te_first, d.te_second);
  if (d.te_joint < largest) {
    if (largest - d.te_joint > kNegativeTolerance) {
      throw Error(ErrorCode::kNumericalInconsistency,
                  "joint transfer entropy below an individual transfer entropy");
    }
    d.te_joint = largest;
  }

  d.redundancy = std::min(d.te_first, d.te_second);
  d.unique_first = d.te_first - d.redundancy;
  d.unique_second = d.te_second - d.redundancy;
  d.synergy = d.te_joint - largest;
  d.interaction = d.synergy - d.redundancy;
  return d;
}

std::vector<ScaleOutcome> multiscale_decompose(const VarParams& var, SourcePair sources,
                                               int target, std::span<const ScaleSpec> scales,
                                               const DareOptions& options) {
  std::vector<ScaleSpec> ordered(scales.begin(), scales.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ScaleSpec& a, const ScaleSpec& b) { return a.tau < b.tau; });

  std::vector<ScaleOutcome> out;
  out.reserve(ordered.size());
  for (const ScaleSpec& spec : ordered) {
    ScaleOutcome outcome;
    outcome.scale = spec.tau;
    try {
      outcome.result = decompose(rescale(var, spec, options), sources, target, spec.tau, options);
    } catch (const Error& e) {
      outcome.error = e.code();
      outcome.message = e.what();
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

}  // namespace msid
