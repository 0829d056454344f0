#pragma once

#include <Eigen/Dense>

namespace msid {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Models whose spectral radius reaches this bound are treated as non-stationary.
inline constexpr double kStabilityMargin = 1e-10;

double max_abs(const Mat& m);

// Largest eigenvalue modulus. Empty matrices have radius 0.
double spectral_radius(const Mat& a);

// a^k by repeated squaring; k >= 0.
Mat matrix_power(const Mat& a, int k);

/// Solves the discrete Lyapunov (Stein) equation P = A P A' + Q.
///
/// Uses Smith's doubling iteration P <- P + A_k P A_k', A_k <- A_k^2 followed
/// by one refinement pass on the residual. Throws NotStable when the spectral
/// radius of A is at least 1 - kStabilityMargin and NoConvergence when the
/// doubling budget runs out.
Mat solve_lyapunov(const Mat& a, const Mat& q);

struct DareOptions {
  // Stop when max|P_{n+1} - P_n| <= tol, or when it is below tol * max(1, max|P|)
  // and has stopped decreasing. The iterate with the smallest update is returned.
  double tolerance = 1e-12;
  int max_iterations = 100000;
  // Optional ridge added to C P C' + R before inversion. Off by default.
  double ridge = 0.0;
  double max_condition = 1e12;
};

struct DareSolution {
  Mat P;  // state error covariance, L x L
  Mat K;  // Kalman gain, L x M
  Mat V;  // innovation covariance, M x M
  int iterations = 0;
  double residual = 0.0;  // max-abs residual of the Riccati equation at P
};

/// Stabilizing solution of the filtering-form Riccati equation
///
///   P = A P A' + Q - (A P C' + S)(C P C' + R)^-1 (C P A' + S')
///
/// by fixed-point iteration from P_0 = Q, symmetrizing after every step.
/// Returns K = (A P C' + S) V^-1 and V = C P C' + R.
DareSolution solve_dare(const Mat& a, const Mat& c, const Mat& q, const Mat& r,
                        const Mat& s, const DareOptions& options = {});

// Max-abs residual of the Riccati equation above for a candidate P.
double dare_residual(const Mat& a, const Mat& c, const Mat& q, const Mat& r,
                     const Mat& s, const Mat& p);

// Smallest eigenvalue of a symmetric matrix (the symmetric part is used).
double min_symmetric_eigenvalue(const Mat& m);

}  // namespace msid
