#include "msid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "msid/error.hpp"

namespace msid {

namespace {

constexpr int kMaxDoublings = 80;
// Polishing below the relative bound continues while the best residual at
// least halves every kStallWindow passes, for at most kPolishLimit passes.
// The window spans several periods of the oscillating error modes that
// complex closed-loop poles produce.
constexpr int kStallWindow = 50;
constexpr double kStallRatio = 0.5;
constexpr int kPolishLimit = 2000;

void require_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

void require_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " has shape " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " has non-finite entries");
  }
}

void require_stable(const Mat& a) {
  const double rho = spectral_radius(a);
  if (rho >= 1.0 - kStabilityMargin) {
    throw Error(ErrorCode::kNotStable, "spectral radius " + std::to_string(rho) + " >= 1");
  }
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

// Sum_{k>=0} A^k Q A'^k by doubling. Assumes A has been checked for stability.
Mat smith_doubling(const Mat& a, const Mat& q) {
  Mat p = q;
  Mat ak = a;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < kMaxDoublings; ++i) {
    Mat inc = ak * p * ak.transpose();
    p += inc;
    if (max_abs(inc) <= eps * std::max(1.0, max_abs(p))) return p;
    ak = ak * ak;
  }
  throw Error(ErrorCode::kNoConvergence,
              "Lyapunov doubling did not converge in " + std::to_string(kMaxDoublings) + " steps");
}

}  // namespace

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double spectral_radius(const Mat& a) {
  require_square(a, "matrix");
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1) return std::abs(a(0, 0));
  Eigen::EigenSolver<Mat> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence, "eigenvalue iteration failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Mat matrix_power(const Mat& a, int k) {
  require_square(a, "matrix");
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "negative matrix power");
  Mat result = Mat::Identity(a.rows(), a.cols());
  Mat base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

double min_symmetric_eigenvalue(const Mat& m) {
  require_square(m, "matrix");
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Mat solve_lyapunov(const Mat& a, const Mat& q) {
  require_square(a, "A");
  require_shape(q, a.rows(), a.rows(), "Q");
  require_finite(a, "A");
  require_finite(q, "Q");
  require_stable(a);

  Mat p = smith_doubling(a, symmetrized(q));
  // One correction pass: the error X = P* - P solves X = A X A' + E.
  Mat residual = a * p * a.transpose() + q - p;
  p += smith_doubling(a, symmetrized(residual));
  return symmetrized(p);
}

double dare_residual(const Mat& a, const Mat& c, const Mat& q, const Mat& r, const Mat& s,
                     const Mat& p) {
  const Mat pct = p * c.transpose();
  const Mat v = c * pct + r;
  const Mat g = a * pct + s;
  const Mat rhs = a * p * a.transpose() + q - g * v.ldlt().solve(g.transpose());
  return max_abs(p - rhs);
}

DareSolution solve_dare(const Mat& a, const Mat& c, const Mat& q, const Mat& r, const Mat& s,
                        const DareOptions& options) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  require_shape(c, m, n, "C");
  require_shape(q, n, n, "Q");
  require_shape(r, m, m, "R");
  require_shape(s, n, m, "S");
  for (const Mat* x : {&a, &c, &q, &r, &s}) require_finite(*x, "DARE input");
  require_stable(a);

  const Mat at = a.transpose();
  const Mat ct = c.transpose();
  auto innovation = [&](const Mat& pct) {
    Mat v = c * pct + r;
    if (options.ridge > 0.0) v.diagonal().array() += options.ridge;
    return v;
  };
  auto factor = [&](const Mat& v) {
    Eigen::LLT<Mat> llt(v);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kSingularInnovation, "C P C' + R is not positive definite");
    }
    return llt;
  };

  // Each pass computes F(P) - P, which is exactly the Riccati residual of the
  // current P. The best P seen so far is kept: near convergence the max-abs
  // residual of the next iterate can exceed the last update when A - K C is
  // far from normal. Iteration stops at the absolute tolerance or, once the
  // residual is below tolerance * max|P|, when progress stalls (round-off
  // floor, or the slow tail of a solution with closed-loop poles near the unit
  // circle).
  Mat p = symmetrized(q);
  Mat best = p;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> history;  // best residual after each pass
  int polishing = -1;  // passes since the relative bound was first met
  Mat pct(n, m), g(n, m), next(n, n);
  bool converged = false;
  int iterations = 0;
  while (iterations < options.max_iterations) {
    ++iterations;
    pct.noalias() = p * ct;
    const auto llt = factor(innovation(pct));
    g.noalias() = a * pct;
    g += s;
    next.noalias() = a * p * at;
    next += q;
    next.noalias() -= g * llt.solve(g.transpose());
    next = symmetrized(next);
    const double residual = max_abs(next - p);
    if (residual < best_residual) {
      best_residual = residual;
      best = p;
    }
    history.push_back(best_residual);
    const bool stalled = history.size() > kStallWindow &&
                         best_residual > kStallRatio * history[history.size() - 1 - kStallWindow];
    if (polishing < 0 && best_residual <= options.tolerance * std::max(1.0, max_abs(p))) polishing = 0;
    if (polishing >= 0) ++polishing;
    if (residual <= options.tolerance ||
        (polishing >= 0 && (stalled || polishing > kPolishLimit))) {
      converged = true;
      break;
    }
    p.swap(next);
  }
  if (!converged) {
    throw Error(ErrorCode::kNoConvergence,
                "Riccati iteration did not converge in " + std::to_string(options.max_iterations) +
                    " iterations");
  }
  p = std::move(best);

  DareSolution sol;
  pct.noalias() = p * ct;
  sol.V = symmetrized(innovation(pct));
  if (m > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(sol.V, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > options.max_condition) {
      throw Error(ErrorCode::kSingularInnovation,
                  "innovation covariance is numerically singular (eigenvalues in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "])");
    }
  }
  const auto llt = factor(sol.V);
  g.noalias() = a * pct;
  g += s;
  sol.K = llt.solve(g.transpose()).transpose();
  sol.P = std::move(p);
  sol.iterations = iterations;
  sol.residual = dare_residual(a, c, q, r, s, sol.P);
  return sol;
}

}  // namespace msid
