#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "msid/linalg.hpp"
#include "msid/var.hpp"

namespace msid {

enum class FilterKind { kHamming, kMovingAverage, kIdentity };

// Accepts "hamming", "ma"/"moving-average" and "identity".
FilterKind parse_filter_kind(std::string_view text);
const char* to_string(FilterKind kind) noexcept;

struct FirFilter {
  FilterKind kind = FilterKind::kIdentity;
  double cutoff = 0.5;
  std::vector<double> coeffs{1.0};  // b_0 .. b_q

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Low-pass FIR design with unit DC gain.
///
/// hamming: ideal low-pass taps 2 f_c sinc(2 f_c (l - q/2)) times the Hamming
/// window 0.54 - 0.46 cos(2 pi l / q), normalized to sum 1. Taps that vanish
/// analytically (sinc at a nonzero integer) are exact zeros, and zero taps at
/// both ends are dropped: they only delay every channel by the same amount,
/// which leaves the statistics of the rescaled process unchanged. The
/// returned order can therefore be smaller than `order`.
///
/// moving-average: order + 1 taps equal to 1 / (order + 1).
/// identity: the single tap 1.
FirFilter design_fir(int order, double cutoff, FilterKind kind);

// |sum_l b_l exp(-i 2 pi f l)| at frequency f in cycles/sample.
double magnitude_response(const FirFilter& fir, double freq);

/// General state-space model X_{n+1} = A X_n + W_n, Y_n = C X_n + V_n with
/// Cov(W) = Q, Cov(V) = R, Cov(W, V) = S.
struct SsParams {
  Mat A, C, Q, R, S;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int obs_dim() const { return static_cast<int>(C.rows()); }
};

/// Innovations form Z_{n+1} = A Z_n + K E_n, Y_n = C Z_n + E_n, Cov(E) = V.
struct IssParams {
  Mat A, C, K, V;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int obs_dim() const { return static_cast<int>(C.rows()); }
};

// Views an ISS as a general SS model: Q = K V K', R = V, S = K V.
SsParams as_state_space(const IssParams& iss);

// Joint noise covariance [[Q, S], [S', R]].
Mat joint_noise_covariance(const SsParams& ss);

struct ScaleSpec {
  int tau = 1;
  int order = 12;
  FilterKind kind = FilterKind::kHamming;

  // Averaging of tau consecutive samples: moving average of order tau - 1.
  static ScaleSpec averaging(int tau) { return {tau, tau - 1, FilterKind::kMovingAverage}; }
};

// Specs for tau = first..last. Moving-average sweeps use order tau - 1 at
// every scale; the other kinds use `order` throughout.
std::vector<ScaleSpec> scale_sweep(int first, int last, int order, FilterKind kind);

/// ISS form of the filtered VARMA(p, q) process over the state
/// [Y_{n-1} .. Y_{n-p}, U_{n-1} .. U_{n-q}]. The state dimension is M (p + q);
/// blocks vanish when p or q is 0. Throws Unstable for a non-stationary VAR and
/// ZeroLeadingCoefficient when |b_0| < 1e-12.
IssParams embed_filtered(const VarParams& var, const FirFilter& fir);

/// SS form of the ISS process sampled every tau steps:
/// A^tau, C, Q_tau, V, A^(tau-1) K V with Q_1 = K V K' and
/// Q_t = A Q_{t-1} A' + K V K'.
SsParams downsample(const IssParams& iss, int tau);

// Innovations form of a general SS model via the Riccati equation.
IssParams to_iss(const SsParams& ss, const DareOptions& options = {});

// design_fir(order, 1 / (2 tau), kind) -> embed_filtered -> downsample -> to_iss.
IssParams rescale(const VarParams& var, const ScaleSpec& spec, const DareOptions& options = {});

}  // namespace msid
