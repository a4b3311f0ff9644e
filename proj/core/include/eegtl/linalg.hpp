#pragma once

#include <Eigen/Dense>
#include <vector>

namespace eegtl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Symmetry tolerance: inputs whose relative asymmetry exceeds this are
/// rejected rather than silently symmetrized.
inline constexpr double kSymTol = 1e-10;

/// Relative eigenvalue floor applied before inverting a covariance.
inline constexpr double kEigFloor = 1e-10;

/// Defaults for the Riemannian mean fixed-point iteration.
inline constexpr double kMeanTol = 1e-8;
inline constexpr int kMeanMaxIter = 50;

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending
/// with the eigenvector columns aligned to them.
struct EigenPair {
  Vec values;
  Mat vectors;
};

/// Relative asymmetry ‖S − Sᵀ‖_F / ‖S‖_F (zero matrix counts as symmetric).
double relative_asymmetry(const Mat& S);

/// Symmetric eigendecomposition. Throws NumericError on asymmetric or
/// non-finite input. The input is symmetrized as (S + Sᵀ)/2 before the
/// solve to absorb round-off.
EigenPair sym_eig(const Mat& S);

/// S + eps·(tr(S)/c)·I. Ridge proportional to the mean eigenvalue, so the
/// amount of regularization is scale-free.
Mat regularize(const Mat& S, double eps);

/// S^{−1/2} with eigenvalues floored at eps·λ_max before the inverse square
/// root, so nearly singular covariances stay invertible. Throws NumericError
/// (all-zero spectrum) when λ_max ≤ 0.
Mat spd_inv_sqrt(const Mat& S, double eps = kEigFloor);

/// Matrix square root, logarithm and exponential through the spectral map.
/// sqrt and log require λ_min > 0 and throw NumericError (not positive
/// definite) otherwise; exp accepts any symmetric matrix.
Mat spd_sqrt(const Mat& S);
Mat spd_log(const Mat& S);
Mat spd_exp(const Mat& S);

/// Affine-invariant Riemannian distance sqrt(Σ log² λ_i) over the
/// eigenvalues λ_i of R1^{−1}R2, computed through the congruence-equivalent
/// symmetric form R1^{−1/2}·R2·R1^{−1/2} so the result is exactly symmetric
/// in its arguments.
double riemannian_distance(const Mat& R1, const Mat& R2);

/// Karcher (Fréchet) mean of SPD matrices under the affine-invariant metric.
/// Fixed-point iteration with unit step from the Euclidean mean; stops when
/// the Frobenius norm of the tangent-space mean drops below tol. Throws
/// ConvergenceError (carrying the last residual) after max_iter steps.
Mat riemannian_mean(const std::vector<Mat>& Rs, double tol = kMeanTol,
                    int max_iter = kMeanMaxIter);

}  // namespace eegtl
