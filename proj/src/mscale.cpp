#include "msid/mscale.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "msid/error.hpp"

namespace msid {

namespace {

constexpr double kMinLeadingTap = 1e-12;
constexpr double kIntegerTolerance = 1e-12;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double nearest = std::round(x);
  if (nearest != 0.0 && std::abs(x - nearest) < kIntegerTolerance) return 0.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

std::vector<double> hamming_taps(int order, double cutoff) {
  std::vector<double> taps(order + 1);
  double sum = 0.0;
  for (int l = 0; l <= order; ++l) {
    const double ideal = 2.0 * cutoff * sinc(2.0 * cutoff * (l - 0.5 * order));
    const double window =
        order == 0 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * l / order);
    taps[l] = ideal * window;
    sum += taps[l];
  }
  for (double& t : taps) t /= sum;

  std::size_t first = 0;
  std::size_t last = taps.size();
  while (first < last && taps[first] == 0.0) ++first;
  while (last > first && taps[last - 1] == 0.0) --last;
  return {taps.begin() + first, taps.begin() + last};
}

}  // namespace

FilterKind parse_filter_kind(std::string_view text) {
  if (text == "hamming") return FilterKind::kHamming;
  if (text == "ma" || text == "moving-average") return FilterKind::kMovingAverage;
  if (text == "identity") return FilterKind::kIdentity;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown filter kind '" + std::string(text) + "', expected hamming, ma or identity");
}

const char* to_string(FilterKind kind) noexcept {
  switch (kind) {
    case FilterKind::kHamming: return "hamming";
    case FilterKind::kMovingAverage: return "ma";
    case FilterKind::kIdentity: return "identity";
  }
  return "unknown";
}

FirFilter design_fir(int order, double cutoff, FilterKind kind) {
  if (order < 0) throw Error(ErrorCode::kInvalidArgument, "filter order must be >= 0");
  if (!(cutoff > 0.0 && cutoff <= 0.5)) {
    throw Error(ErrorCode::kInvalidCutoff,
                "cutoff " + std::to_string(cutoff) + " outside (0, 0.5] cycles/sample");
  }
  FirFilter fir;
  fir.kind = kind;
  fir.cutoff = cutoff;
  switch (kind) {
    case FilterKind::kIdentity:
      fir.coeffs = {1.0};
      break;
    case FilterKind::kMovingAverage:
      fir.coeffs.assign(order + 1, 1.0 / (order + 1));
      break;
    case FilterKind::kHamming:
      fir.coeffs = hamming_taps(order, cutoff);
      break;
  }
  if (fir.coeffs.empty() || std::abs(fir.coeffs.front()) < kMinLeadingTap) {
    throw Error(ErrorCode::kZeroLeadingCoefficient, "leading filter tap underflows");
  }
  return fir;
}

double magnitude_response(const FirFilter& fir, double freq) {
  std::complex<double> acc = 0.0;
  for (int l = 0; l <= fir.order(); ++l) {
    acc += fir.coeffs[l] * std::polar(1.0, -2.0 * std::numbers::pi * freq * l);
  }
  return std::abs(acc);
}

SsParams as_state_space(const IssParams& iss) {
  const Mat kv = iss.K * iss.V;
  return {iss.A, iss.C, kv * iss.K.transpose(), iss.V, kv};
}

Mat joint_noise_covariance(const SsParams& ss) {
  const Eigen::Index n = ss.A.rows();
  const Eigen::Index m = ss.C.rows();
  Mat joint(n + m, n + m);
  joint << ss.Q, ss.S, ss.S.transpose(), ss.R;
  return joint;
}

std::vector<ScaleSpec> scale_sweep(int first, int last, int order, FilterKind kind) {
  if (first < 1 || last < first) {
    throw Error(ErrorCode::kInvalidArgument, "scale range must satisfy 1 <= first <= last");
  }
  std::vector<ScaleSpec> specs;
  for (int tau = first; tau <= last; ++tau) {
    specs.push_back(kind == FilterKind::kMovingAverage ? ScaleSpec::averaging(tau)
                                                       : ScaleSpec{tau, order, kind});
  }
  return specs;
}

IssParams embed_filtered(const VarParams& var, const FirFilter& fir) {
  validate(var);
  if (!is_stable(var)) throw Error(ErrorCode::kUnstable, "VAR model is not stationary");
  if (fir.coeffs.empty() || std::abs(fir.coeffs.front()) < kMinLeadingTap) {
    throw Error(ErrorCode::kZeroLeadingCoefficient, "leading filter tap underflows");
  }

  const int m = var.channels();
  const int p = var.order();
  const int q = fir.order();
  const int dim = m * (p + q);
  const double b0 = fir.coeffs.front();
  const auto block = [m](Mat& x, int row, int col) { return x.block(row * m, col * m, m, m); };

  IssParams iss;
  iss.C = Mat::Zero(m, dim);
  for (int k = 0; k < p; ++k) iss.C.middleCols(k * m, m) = var.coeffs[k];
  for (int l = 1; l <= q; ++l) {
    iss.C.middleCols((p + l - 1) * m, m) = fir.coeffs[l] * Mat::Identity(m, m);
  }

  iss.A = Mat::Zero(dim, dim);
  if (p > 0) iss.A.topRows(m) = iss.C;
  for (int k = 1; k < p; ++k) block(iss.A, k, k - 1).setIdentity();
  for (int l = 1; l < q; ++l) block(iss.A, p + l, p + l - 1).setIdentity();

  iss.K = Mat::Zero(dim, m);
  if (p > 0) iss.K.topRows(m).setIdentity();
  if (q > 0) iss.K.middleRows(p * m, m) = Mat::Identity(m, m) / b0;

  iss.V = b0 * b0 * var.sigma;
  return iss;
}

SsParams downsample(const IssParams& iss, int tau) {
  if (tau < 1) throw Error(ErrorCode::kInvalidArgument, "scale factor must be >= 1");
  const Mat kv = iss.K * iss.V;
  const Mat noise = kv * iss.K.transpose();

  SsParams ss;
  ss.C = iss.C;
  ss.R = iss.V;
  ss.Q = noise;
  for (int t = 2; t <= tau; ++t) ss.Q = iss.A * ss.Q * iss.A.transpose() + noise;
  ss.Q = 0.5 * (ss.Q + ss.Q.transpose());
  const Mat lead = matrix_power(iss.A, tau - 1);
  ss.S = lead * kv;
  ss.A = lead * iss.A;
  return ss;
}

IssParams to_iss(const SsParams& ss, const DareOptions& options) {
  DareSolution sol = solve_dare(ss.A, ss.C, ss.Q, ss.R, ss.S, options);
  return {ss.A, ss.C, std::move(sol.K), std::move(sol.V)};
}

IssParams rescale(const VarParams& var, const ScaleSpec& spec, const DareOptions& options) {
  if (spec.tau < 1) throw Error(ErrorCode::kInvalidArgument, "scale factor must be >= 1");
  const FirFilter fir = design_fir(spec.order, 0.5 / spec.tau, spec.kind);
  return to_iss(downsample(embed_filtered(var, fir), spec.tau), options);
}

}  // namespace msid
