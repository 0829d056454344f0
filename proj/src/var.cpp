#include "msid/var.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "msid/error.hpp"

namespace msid {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kRankTolerance = 1e-12;

Mat centered(const Mat& values) {
  const Eigen::RowVectorXd mean = values.colwise().mean();
  return values.rowwise() - mean;
}

void check_series(const TimeSeries& data) {
  if (data.samples() < 1 || data.channels() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "time series is empty");
  }
  if (!data.values.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "time series has non-finite values");
  }
}

struct OlsFit {
  Mat coeffs;     // M x M*p, [A_1 ... A_p]
  Mat residuals;  // rows x M
};

// Regresses rows first..N-1 of `x` on their `order` previous rows.
OlsFit fit_lagged(const Mat& x, int order, int first) {
  const Eigen::Index m = x.cols();
  const Eigen::Index rows = x.rows() - first;
  Mat target = x.bottomRows(rows);
  if (order == 0) return {Mat(m, 0), target};

  Mat regressors(rows, m * order);
  for (int k = 1; k <= order; ++k) {
    regressors.middleCols((k - 1) * m, m) = x.middleRows(first - k, rows);
  }
  const Mat gram = regressors.transpose() * regressors;
  Eigen::LDLT<Mat> ldlt(gram);
  const auto d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= kRankTolerance * std::max(1.0, d.maxCoeff())) {
    throw Error(ErrorCode::kRankDeficient,
                "regressor Gram matrix is singular for order " + std::to_string(order));
  }
  const Mat beta = ldlt.solve(regressors.transpose() * target);  // M*p x M
  OlsFit fit;
  fit.coeffs = beta.transpose();
  fit.residuals = target - regressors * beta;
  return fit;
}

}  // namespace

void validate(const VarParams& params) {
  const Eigen::Index m = params.sigma.rows();
  if (params.sigma.cols() != m || m == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be a non-empty square matrix");
  }
  for (const Mat& a : params.coeffs) {
    if (a.rows() != m || a.cols() != m) {
      throw Error(ErrorCode::kInvalidArgument, "coefficient matrix shape does not match sigma");
    }
    if (!a.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite VAR coefficient");
  }
  if (!params.sigma.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite sigma");
  const double scale = std::max(1.0, max_abs(params.sigma));
  if (max_abs(params.sigma - params.sigma.transpose()) > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kInvalidArgument, "sigma is not symmetric");
  }
  if (min_symmetric_eigenvalue(params.sigma) < -kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kInvalidArgument, "sigma is not positive semidefinite");
  }
}

Mat companion(const VarParams& params) {
  const int m = params.channels();
  const int p = params.order();
  Mat out = Mat::Zero(m * p, m * p);
  for (int k = 0; k < p; ++k) out.block(0, k * m, m, m) = params.coeffs[k];
  if (p > 1) out.bottomLeftCorner(m * (p - 1), m * (p - 1)).setIdentity();
  return out;
}

bool is_stable(const VarParams& params) {
  return spectral_radius(companion(params)) < 1.0 - kStabilityMargin;
}

ScenarioConfig ScenarioConfig::preset(char name) {
  ScenarioConfig cfg;
  switch (name) {
    case 'a': break;
    case 'b': cfg.c = 1.0; break;
    case 'c': cfg.b = 0.5; break;
    case 'd': cfg.b = 0.5; cfg.c = 1.0; break;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("unknown scenario '") + name + "', expected a, b, c or d");
  }
  return cfg;
}

VarParams build_scenario(const ScenarioConfig& cfg) {
  if (!(cfg.b >= 0.0 && cfg.b <= 1.0) || !(cfg.c >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scenario requires 0 <= b <= 1 and c >= 0");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(cfg.rho[i] >= 0.0 && cfg.rho[i] < 1.0) || !(cfg.freq[i] >= 0.0 && cfg.freq[i] <= 0.5)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "scenario requires 0 <= rho < 1 and 0 <= f <= 0.5");
    }
  }
  VarParams params{{Mat::Zero(4, 4), Mat::Zero(4, 4)}, Mat::Identity(4, 4)};
  Mat& lag1 = params.coeffs[0];
  Mat& lag2 = params.coeffs[1];
  for (int i = 0; i < 3; ++i) {
    lag1(i, i) = 2.0 * cfg.rho[i] * std::cos(2.0 * std::numbers::pi * cfg.freq[i]);
    lag2(i, i) = -cfg.rho[i] * cfg.rho[i];
  }
  lag1(1, 0) = cfg.c;
  lag1(2, 0) = cfg.c;
  lag1(3, 1) = cfg.b;
  lag1(3, 2) = 1.0 - cfg.b;
  if (!is_stable(params)) {
    throw Error(ErrorCode::kUnstable, "scenario parameters give a non-stationary process");
  }
  return params;
}

std::vector<std::string> default_labels(int channels) {
  std::vector<std::string> labels;
  labels.reserve(channels);
  for (int i = 1; i <= channels; ++i) labels.push_back("Y" + std::to_string(i));
  return labels;
}

TimeSeries simulate(const VarParams& params, int n, std::uint64_t seed, int burn_in) {
  validate(params);
  if (n < 1 || burn_in < 0) {
    throw Error(ErrorCode::kInvalidArgument, "simulate requires n >= 1 and burn_in >= 0");
  }
  if (!is_stable(params)) throw Error(ErrorCode::kUnstable, "cannot simulate a non-stationary VAR");

  const int m = params.channels();
  const int p = params.order();
  // LDLT tolerates semidefinite sigma (e.g. a channel without its own noise).
  Eigen::LDLT<Mat> ldlt(params.sigma);
  const Mat mixing = ldlt.transpositionsP().transpose() * Mat(ldlt.matrixL()) *
                     ldlt.vectorD().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const int total = n + burn_in;
  Mat y = Mat::Zero(total + p, m);  // p leading rows of zero initial state
  Vec z(m);
  for (int t = p; t < total + p; ++t) {
    for (int i = 0; i < m; ++i) z(i) = normal(rng);
    Vec next = mixing * z;
    for (int k = 1; k <= p; ++k) next.noalias() += params.coeffs[k - 1] * y.row(t - k).transpose();
    y.row(t) = next.transpose();
  }
  return {y.bottomRows(n), default_labels(m)};
}

VarParams estimate(const TimeSeries& data, int order) {
  check_series(data);
  const int n = data.samples();
  const int m = data.channels();
  if (order < 0) throw Error(ErrorCode::kInvalidArgument, "negative model order");
  const int dof = n - order - m * order;
  if (dof < 1 || n <= m * order + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "too few samples (" + std::to_string(n) + ") for order " + std::to_string(order));
  }

  const Mat x = centered(data.values);
  const OlsFit fit = fit_lagged(x, order, order);
  VarParams params;
  for (int k = 0; k < order; ++k) params.coeffs.push_back(fit.coeffs.middleCols(k * m, m));
  // For p = 0 the denominator is N, i.e. the plain sample covariance of centered data.
  params.sigma = (fit.residuals.transpose() * fit.residuals) / static_cast<double>(dof);
  return params;
}

OrderSelection select_order_bic(const TimeSeries& data, int max_order) {
  check_series(data);
  if (max_order < 1) throw Error(ErrorCode::kInvalidArgument, "max_order must be >= 1");
  const int m = data.channels();
  const int n_eff = data.samples() - max_order;
  if (n_eff <= m * max_order + 1) {
    throw Error(ErrorCode::kInvalidArgument, "too few samples for max_order " +
                                                 std::to_string(max_order));
  }

  const Mat x = centered(data.values);
  OrderSelection out;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= max_order; ++p) {
    const OlsFit fit = fit_lagged(x, p, max_order);
    const Mat cov = (fit.residuals.transpose() * fit.residuals) / static_cast<double>(n_eff);
    Eigen::LLT<Mat> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kRankDeficient, "singular residual covariance at order " +
                                                 std::to_string(p));
    }
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double bic = log_det + static_cast<double>(m) * m * p * std::log(n_eff) / n_eff;
    out.bic.push_back(bic);
    if (bic < best) {
      best = bic;
      out.order = p;
    }
  }
  return out;
}

}  // namespace msid
