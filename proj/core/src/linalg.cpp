#include "eegtl/linalg.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "eegtl/errors.hpp"

namespace eegtl {

namespace {

void require_square(const Mat& S, const char* op) {
  if (S.rows() != S.cols()) {
    throw DimensionError(std::string(op) + ": matrix is " +
                         std::to_string(S.rows()) + "x" +
                         std::to_string(S.cols()) + ", expected square");
  }
  if (S.rows() == 0) {
    throw DimensionError(std::string(op) + ": matrix is empty");
  }
}

void require_symmetric_finite(const Mat& S, const char* op) {
  require_square(S, op);
  if (!S.allFinite()) {
    throw NumericError(std::string(op) + ": non-finite entry in input");
  }
  double asym = relative_asymmetry(S);
  if (asym > kSymTol) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", asym);
    throw NumericError(std::string(op) + ": non-symmetric input, relative asymmetry " +
                       buf);
  }
}

/// Spectral map f applied eigenvalue-wise: V·diag(f(λ))·Vᵀ.
template <typename F>
Mat spectral_map(const EigenPair& eig, F f) {
  Vec mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    mapped[i] = f(eig.values[i]);
  }
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

void require_positive_definite(const EigenPair& eig, const char* op) {
  // Eigenvalues are sorted descending, so the last one is the minimum.
  double lambda_min = eig.values[eig.values.size() - 1];
  if (lambda_min <= 0.0) {
    throw NumericError(std::string(op) + ": not positive definite, lambda_min = " +
                       std::to_string(lambda_min));
  }
}

}  // namespace

double relative_asymmetry(const Mat& S) {
  double norm = S.norm();
  if (norm == 0.0) return 0.0;
  return (S - S.transpose()).norm() / norm;
}

EigenPair sym_eig(const Mat& S) {
  require_symmetric_finite(S, "sym_eig");
  Mat sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("sym_eig: eigensolver failed to converge");
  }
  // Eigen sorts ascending; flip to descending.
  EigenPair out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Mat regularize(const Mat& S, double eps) {
  require_square(S, "regularize");
  if (eps <= 0.0) {
    throw InvalidArgumentError("regularize: eps must be > 0, got " +
                               std::to_string(eps));
  }
  double scale = S.trace() / static_cast<double>(S.rows());
  return S + eps * scale * Mat::Identity(S.rows(), S.cols());
}

Mat spd_inv_sqrt(const Mat& S, double eps) {
  if (eps < 0.0) {
    throw InvalidArgumentError("spd_inv_sqrt: eps must be >= 0, got " +
                               std::to_string(eps));
  }
  EigenPair eig = sym_eig(S);
  double lambda_max = eig.values[0];
  if (lambda_max <= 0.0) {
    throw NumericError("spd_inv_sqrt: all-zero spectrum, lambda_max = " +
                       std::to_string(lambda_max));
  }
  double floor = eps * lambda_max;
  return spectral_map(eig, [floor](double l) {
    return 1.0 / std::sqrt(std::max(l, floor));
  });
}

Mat spd_sqrt(const Mat& S) {
  EigenPair eig = sym_eig(S);
  require_positive_definite(eig, "spd_sqrt");
  return spectral_map(eig, [](double l) { return std::sqrt(l); });
}

Mat spd_log(const Mat& S) {
  EigenPair eig = sym_eig(S);
  require_positive_definite(eig, "spd_log");
  return spectral_map(eig, [](double l) { return std::log(l); });
}

Mat spd_exp(const Mat& S) {
  EigenPair eig = sym_eig(S);
  return spectral_map(eig, [](double l) { return std::exp(l); });
}

double riemannian_distance(const Mat& R1, const Mat& R2) {
  if (R1.rows() != R2.rows() || R1.cols() != R2.cols()) {
    throw DimensionError("riemannian_distance: dimension mismatch, " +
                         std::to_string(R1.rows()) + "x" + std::to_string(R1.cols()) +
                         " vs " + std::to_string(R2.rows()) + "x" +
                         std::to_string(R2.cols()));
  }
  EigenPair e1 = sym_eig(R1);
  require_positive_definite(e1, "riemannian_distance");
  Mat w = spectral_map(e1, [](double l) { return 1.0 / std::sqrt(l); });
  // Symmetrize the whitened product: round-off in the two multiplies can
  // exceed the strict asymmetry tolerance when R1 is poorly conditioned.
  Mat whitened = w * R2 * w;
  EigenPair inner = sym_eig(0.5 * (whitened + whitened.transpose()));
  require_positive_definite(inner, "riemannian_distance");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < inner.values.size(); ++i) {
    double l = std::log(inner.values[i]);
    sum += l * l;
  }
  return std::sqrt(sum);
}

Mat riemannian_mean(const std::vector<Mat>& Rs, double tol, int max_iter) {
  if (Rs.empty()) {
    throw EmptyInputError("riemannian_mean: empty input list");
  }
  const Eigen::Index c = Rs[0].rows();
  for (const Mat& R : Rs) {
    if (R.rows() != c || R.cols() != c) {
      throw DimensionError("riemannian_mean: matrices have mixed dimensions");
    }
  }

  Mat mean = Mat::Zero(c, c);
  for (const Mat& R : Rs) mean += R;
  mean /= static_cast<double>(Rs.size());

  // Tangent-space mean at the current estimate; its norm is the
  // stationarity residual of the Karcher condition.
  auto tangent_mean = [&Rs, c](const Mat& at) {
    Mat inv_half = spd_inv_sqrt(at, 0.0);
    Mat tangent = Mat::Zero(c, c);
    for (const Mat& R : Rs) {
      Mat whitened = inv_half * R * inv_half;
      tangent += spd_log(0.5 * (whitened + whitened.transpose()));
    }
    tangent /= static_cast<double>(Rs.size());
    // Near convergence the tangent shrinks toward zero while its round-off
    // asymmetry does not, so symmetrize before feeding it back to spd_exp.
    return Mat(0.5 * (tangent + tangent.transpose()));
  };

  double residual = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Mat tangent = tangent_mean(mean);
    residual = tangent.norm();
    if (residual < tol) return mean;
    Mat half = spd_sqrt(mean);
    Mat updated = half * spd_exp(tangent) * half;
    mean = 0.5 * (updated + updated.transpose());
  }
  // The final update may have landed inside tol; check once more.
  residual = tangent_mean(mean).norm();
  if (residual < tol) return mean;
  throw ConvergenceError("riemannian_mean: no convergence after " +
                             std::to_string(max_iter) + " iterations, residual " +
                             std::to_string(residual),
                         residual);
}

}  // namespace eegtl
