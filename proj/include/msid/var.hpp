#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "msid/linalg.hpp"

namespace msid {

/// Vector autoregression Y_n = sum_k A_k Y_{n-k} + U_n with Cov(U_n) = sigma.
/// An empty coefficient list is white noise.
struct VarParams {
  std::vector<Mat> coeffs;
  Mat sigma;

  int channels() const { return static_cast<int>(sigma.rows()); }
  int order() const { return static_cast<int>(coeffs.size()); }
};

// Throws InvalidArgument on shape mismatch, non-finite entries or a sigma
// that is not symmetric positive semidefinite.
void validate(const VarParams& params);

// Block companion matrix, M*p x M*p (0 x 0 for p = 0).
Mat companion(const VarParams& params);

// Spectral radius of the companion matrix below 1 - kStabilityMargin.
bool is_stable(const VarParams& params);

/// Four-channel benchmark: three damped oscillators with pole moduli rho and
/// frequencies freq (cycles/sample), Y1 driving Y2 and Y3 with gain c, and Y4
/// driven by Y2 and Y3 with weights b and 1 - b. Unit innovation covariance.
struct ScenarioConfig {
  double b = 0.0;
  double c = 0.0;
  std::array<double, 3> rho{0.95, 0.95, 0.95};
  std::array<double, 3> freq{0.1, 0.025, 0.025};

  // Benchmark configurations 'a' (b=c=0), 'b' (b=0, c=1), 'c' (b=0.5, c=0)
  // and 'd' (b=0.5, c=1).
  static ScenarioConfig preset(char name);
};

VarParams build_scenario(const ScenarioConfig& cfg);

struct TimeSeries {
  Mat values;  // samples x channels
  std::vector<std::string> labels;

  int samples() const { return static_cast<int>(values.rows()); }
  int channels() const { return static_cast<int>(values.cols()); }
};

// Labels "Y1".."YM".
std::vector<std::string> default_labels(int channels);

inline constexpr int kDefaultBurnIn = 1000;

/// Draws n samples of the VAR recursion started from zero state after
/// discarding burn_in samples. Innovations are Gaussian with covariance sigma,
/// generated from a 64-bit Mersenne Twister seeded with `seed`.
TimeSeries simulate(const VarParams& params, int n, std::uint64_t seed,
                    int burn_in = kDefaultBurnIn);

/// Least-squares fit of a VAR(order) after per-channel mean removal. The
/// residual covariance is normalized by N - p - M*p.
VarParams estimate(const TimeSeries& data, int order);

struct OrderSelection {
  int order = 0;
  std::vector<double> bic;  // bic[p - 1] for p = 1..max_order
};

/// BIC(p) = ln det(Sigma_p) + M^2 p ln(N_eff) / N_eff over p = 1..max_order,
/// all orders fitted on the same N_eff = N - max_order targets. Sigma_p is
/// the maximum-likelihood residual covariance. Ties go to the smaller order.
OrderSelection select_order_bic(const TimeSeries& data, int max_order);

}  // namespace msid
