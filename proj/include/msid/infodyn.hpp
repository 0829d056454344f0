#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msid/error.hpp"
#include "msid/linalg.hpp"
#include "msid/mscale.hpp"
#include "msid/var.hpp"

namespace msid {

// Channel indices are 0-based throughout the library.
using IndexSet = std::vector<int>;

/// Prediction-error variance of channel `target` given the past of the
/// channels in `cond` (which must contain the target): the target's diagonal
/// entry of the innovation covariance of the submodel
/// (A, C(cond, :), K V K', V(cond, cond), K V(:, cond)).
double partial_variance(const IssParams& iss, int target, IndexSet cond,
                        const DareOptions& options = {});

/// Partial variances of one target for several conditioning sets, keyed by
/// the sorted set.
struct PartialVarianceSet {
  int target = 0;
  std::map<IndexSet, double> entries;

  double at(IndexSet cond) const;
  // Largest violation of lambda(a u b) <= lambda(a) over stored nested pairs.
  double monotonicity_violation() const;
};

PartialVarianceSet partial_variances(const IssParams& iss, int target,
                                     const std::vector<IndexSet>& sets,
                                     const DareOptions& options = {});

// 1/2 ln(lambda_{j|j} / lambda_{j|ij}) in nats.
double transfer_entropy(const IssParams& iss, int source, int target,
                        const DareOptions& options = {});

struct SourcePair {
  int first = 0;
  int second = 0;
};

// 1/2 ln(lambda_{j|j} / lambda_{j|ijk}) in nats.
double joint_transfer_entropy(const IssParams& iss, SourcePair sources, int target,
                              const DareOptions& options = {});

/// Interaction (IID) and minimum-mutual-information partial (PID)
/// decomposition of the transfer from two sources to one target. All values
/// in nats:
///   te_joint = te_first + te_second + interaction
///   te_joint = unique_first + unique_second + redundancy + synergy
///   te_first = unique_first + redundancy, te_second = unique_second + redundancy
///   redundancy = min(te_first, te_second), interaction = synergy - redundancy
struct TeDecomposition {
  int scale = 1;
  int target = 0;
  SourcePair sources;
  double te_first = 0.0;
  double te_second = 0.0;
  double te_joint = 0.0;
  double interaction = 0.0;
  double unique_first = 0.0;
  double unique_second = 0.0;
  double redundancy = 0.0;
  double synergy = 0.0;
};

/// Round-off below 1e-12 nats is clamped to zero, as are negative transfer
/// values down to -1e-10. Anything more negative, or a joint transfer below
/// an individual one by more than 1e-10, raises NumericalInconsistency.
TeDecomposition decompose(const IssParams& iss, SourcePair sources, int target, int scale = 1,
                          const DareOptions& options = {});

struct ScaleOutcome {
  int scale = 1;
  std::optional<TeDecomposition> result;
  std::optional<ErrorCode> error;
  std::string message;

  bool ok() const { return result.has_value(); }
};

/// rescale + decompose for each spec. A failure at one scale is recorded in
/// its outcome and does not stop the others. Output is sorted by scale.
std::vector<ScaleOutcome> multiscale_decompose(const VarParams& var, SourcePair sources,
                                               int target, std::span<const ScaleSpec> scales,
                                               const DareOptions& options = {});

}  // namespace msid
