#include "eegtl/linalg.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "eegtl/errors.hpp"
#include "eegtl/rng.hpp"
#include "test_support.hpp"

using eegtl::Mat;
using eegtl::Vec;
using test_support::random_invertible;
using test_support::random_spd;
using test_support::random_symmetric;

namespace {

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("sym_eig diagonal input sorts eigenvalues descending") {
  Mat s = Mat::Zero(3, 3);
  s(0, 0) = 1.0;
  s(1, 1) = 5.0;
  s(2, 2) = 3.0;
  auto eig = eegtl::sym_eig(s);
  CHECK(eig.values[0] == doctest::Approx(5.0));
  CHECK(eig.values[1] == doctest::Approx(3.0));
  CHECK(eig.values[2] == doctest::Approx(1.0));
  // Vectors are permuted identity columns, up to sign.
  CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig of the identity") {
  auto eig = eegtl::sym_eig(Mat::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(eig.values[i] == doctest::Approx(1.0));
}

TEST_CASE("sym_eig analytic 2x2 case") {
  Mat s(2, 2);
  s << 2, 1, 1, 2;
  auto eig = eegtl::sym_eig(s);
  CHECK(eig.values[0] == doctest::Approx(3.0));
  CHECK(eig.values[1] == doctest::Approx(1.0));
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // First eigenvector is (1,1)/sqrt(2) up to sign: components equal.
  CHECK(std::abs(eig.vectors(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(eig.vectors(0, 0) == doctest::Approx(eig.vectors(1, 0)));
  // Second is (1,-1)/sqrt(2) up to sign: components opposite.
  CHECK(std::abs(eig.vectors(0, 1)) == doctest::Approx(inv_sqrt2));
  CHECK(eig.vectors(0, 1) == doctest::Approx(-eig.vectors(1, 1)));
}

TEST_CASE("sym_eig rejects asymmetric and non-finite input") {
  Mat bad(2, 2);
  bad << 1, 2, 0, 1;
  CHECK_THROWS_WITH_AS(eegtl::sym_eig(bad), doctest::Contains("non-symmetric"),
                       eegtl::NumericError);
  Mat nan_mat = Mat::Identity(2, 2);
  nan_mat(0, 1) = std::nan("");
  nan_mat(1, 0) = std::nan("");
  CHECK_THROWS_WITH_AS(eegtl::sym_eig(nan_mat), doctest::Contains("non-finite"),
                       eegtl::NumericError);
  CHECK_THROWS_AS(eegtl::sym_eig(Mat::Identity(2, 3)), eegtl::DimensionError);
}

TEST_CASE("sym_eig reconstruction and orthonormality on random input") {
  eegtl::Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng.index(7));
    Mat s = random_symmetric(rng, n);
    auto eig = eegtl::sym_eig(s);
    Mat rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK((s - rebuilt).norm() / s.norm() < 1e-8);
    CHECK((eig.vectors.transpose() * eig.vectors - Mat::Identity(n, n)).norm() <
          1e-8);
    for (int i = 0; i + 1 < n; ++i) CHECK(eig.values[i] >= eig.values[i + 1]);
  }
}

TEST_CASE("regularize adds a trace-scaled ridge") {
  Mat r = eegtl::regularize(Mat::Identity(2, 2), 0.1);
  CHECK(r(0, 0) == doctest::Approx(1.1));
  CHECK(r(1, 1) == doctest::Approx(1.1));
  CHECK(r(0, 1) == doctest::Approx(0.0));

  // Rank-1 PSD plus ridge: smallest eigenvalue becomes eps * tr/c.
  Mat ones(2, 2);
  ones << 1, 1, 1, 1;
  auto eig = eegtl::sym_eig(eegtl::regularize(ones, 0.01));
  CHECK(eig.values[1] == doctest::Approx(0.01));

  // Zero trace leaves the matrix untouched; the failure surfaces downstream.
  Mat z = eegtl::regularize(Mat::Zero(2, 2), 1.0);
  CHECK(z.norm() == 0.0);

  CHECK_THROWS_AS(eegtl::regularize(Mat::Identity(2, 2), 0.0),
                  eegtl::InvalidArgumentError);
}

TEST_CASE("spd_inv_sqrt diagonal and identity cases") {
  Mat m = eegtl::spd_inv_sqrt(diag2(4.0, 9.0));
  CHECK(m(0, 0) == doctest::Approx(0.5));
  CHECK(m(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(m(0, 1) == doctest::Approx(0.0));

  Mat id = eegtl::spd_inv_sqrt(Mat::Identity(4, 4));
  CHECK((id - Mat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("spd_inv_sqrt whitens its input") {
  Mat s(2, 2);
  s << 2, 1, 1, 2;
  Mat m = eegtl::spd_inv_sqrt(s);
  CHECK((m * s * m - Mat::Identity(2, 2)).norm() < 1e-8);

  eegtl::Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng.index(7));
    Mat r = random_spd(rng, n, 1e6);
    Mat w = eegtl::spd_inv_sqrt(r);
    CHECK((w * r * w - Mat::Identity(n, n)).norm() < 1e-6);
  }
}

TEST_CASE("spd_inv_sqrt floors tiny eigenvalues and rejects a dead spectrum") {
  // Rank-1 matrix: the zero eigenvalue is floored at eps * lambda_max, so
  // the result stays finite instead of dividing by zero.
  Mat ones(2, 2);
  ones << 1, 1, 1, 1;
  Mat w = eegtl::spd_inv_sqrt(ones, 1e-10);
  CHECK(w.allFinite());

  CHECK_THROWS_WITH_AS(eegtl::spd_inv_sqrt(Mat::Zero(2, 2)),
                       doctest::Contains("all-zero spectrum"),
                       eegtl::NumericError);
  CHECK_THROWS_WITH_AS(eegtl::spd_inv_sqrt(-Mat::Identity(2, 2)),
                       doctest::Contains("all-zero spectrum"),
                       eegtl::NumericError);
}

TEST_CASE("spd_log, spd_exp and spd_sqrt closed-form cases") {
  CHECK(eegtl::spd_log(Mat::Identity(3, 3)).norm() == doctest::Approx(0.0));

  Mat d = eegtl::spd_log(diag2(std::exp(1.0), std::exp(2.0)));
  CHECK(d(0, 0) == doctest::Approx(1.0));
  CHECK(d(1, 1) == doctest::Approx(2.0));

  Mat r = eegtl::spd_sqrt(diag2(4.0, 9.0));
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("spd_log/exp/sqrt roundtrips on random SPD matrices") {
  eegtl::Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng.index(7));
    Mat s = random_spd(rng, n, 1e4);
    CHECK((eegtl::spd_exp(eegtl::spd_log(s)) - s).norm() / s.norm() < 1e-7);
    Mat h = eegtl::spd_sqrt(s);
    CHECK((h * h - s).norm() / s.norm() < 1e-7);
  }
}

TEST_CASE("spd_log and spd_sqrt reject non-positive-definite input") {
  CHECK_THROWS_WITH_AS(eegtl::spd_log(diag2(1.0, -1.0)),
                       doctest::Contains("not positive definite"),
                       eegtl::NumericError);
  CHECK_THROWS_WITH_AS(eegtl::spd_sqrt(Mat::Zero(2, 2)),
                       doctest::Contains("not positive definite"),
                       eegtl::NumericError);
}

TEST_CASE("riemannian_distance closed-form cases") {
  eegtl::Rng rng(3);
  Mat r = random_spd(rng, 4);
  CHECK(eegtl::riemannian_distance(r, r) == doctest::Approx(0.0).epsilon(1e-8));

  // Eigenvalues of I^{-1} * diag(e^2, 1) are (e^2, 1); logs are (2, 0).
  CHECK(eegtl::riemannian_distance(Mat::Identity(2, 2),
                                   diag2(std::exp(2.0), 1.0)) ==
        doctest::Approx(2.0));
}

TEST_CASE("riemannian_distance matches the generalized-eigenvalue oracle") {
  eegtl::Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng.index(5));
    Mat r1 = random_spd(rng, n);
    Mat r2 = random_spd(rng, n);
    // Oracle: eigenvalues of R1^{-1} R2 via the generic (non-symmetric)
    // eigensolver, a different route than the whitening the library uses.
    Eigen::EigenSolver<Mat> es(r1.inverse() * r2);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double l = std::log(es.eigenvalues()[i].real());
      sum += l * l;
    }
    CHECK(eegtl::riemannian_distance(r1, r2) ==
          doctest::Approx(std::sqrt(sum)).epsilon(1e-6));
    CHECK(eegtl::riemannian_distance(r1, r2) ==
          doctest::Approx(eegtl::riemannian_distance(r2, r1)).epsilon(1e-8));
  }
}

TEST_CASE("riemannian_distance is affine invariant") {
  eegtl::Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng.index(5));
    Mat r1 = random_spd(rng, n);
    Mat r2 = random_spd(rng, n);
    Mat p = random_invertible(rng, n);
    double d = eegtl::riemannian_distance(r1, r2);
    double dp = eegtl::riemannian_distance(p * r1 * p.transpose(),
                                           p * r2 * p.transpose());
    CHECK(std::abs(d - dp) < 1e-6);
  }
}

TEST_CASE("riemannian_distance error cases") {
  CHECK_THROWS_AS(
      eegtl::riemannian_distance(Mat::Identity(2, 2), Mat::Identity(3, 3)),
      eegtl::DimensionError);
  CHECK_THROWS_WITH_AS(
      eegtl::riemannian_distance(diag2(1.0, -1.0), Mat::Identity(2, 2)),
      doctest::Contains("not positive definite"), eegtl::NumericError);
}

TEST_CASE("riemannian_mean of identical matrices is that matrix") {
  eegtl::Rng rng(13);
  Mat a = random_spd(rng, 5);
  Mat m = eegtl::riemannian_mean({a, a, a});
  CHECK((m - a).norm() < 1e-8);
}

TEST_CASE("riemannian_mean of commuting matrices is the geometric mean") {
  Mat m = eegtl::riemannian_mean({diag2(1.0, 4.0), diag2(4.0, 1.0)});
  CHECK((m - diag2(2.0, 2.0)).norm() < 1e-6);

  // The same closed form holds for any commuting pair: shared eigenbasis,
  // eigenvalues averaged geometrically.
  eegtl::Rng rng(17);
  Mat q = test_support::random_orthogonal(rng, 3);
  Vec a(3), b(3);
  a << 1.0, 2.0, 5.0;
  b << 9.0, 0.5, 5.0;
  Mat ra = q * a.asDiagonal() * q.transpose();
  Mat rb = q * b.asDiagonal() * q.transpose();
  Vec g = (a.array() * b.array()).sqrt();
  Mat expected = q * g.asDiagonal() * q.transpose();
  Mat mean = eegtl::riemannian_mean({0.5 * (ra + ra.transpose()),
                                     0.5 * (rb + rb.transpose())});
  CHECK((mean - expected).norm() < 1e-6);
}

TEST_CASE("riemannian_mean satisfies the stationarity condition") {
  eegtl::Rng rng(19);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Mat> rs;
    for (int i = 0; i < 8; ++i) rs.push_back(random_spd(rng, 4, 50.0));
    Mat m = eegtl::riemannian_mean(rs);
    CHECK(test_support::karcher_residual(rs, m) < 1e-8);
  }
}

TEST_CASE("riemannian_mean is congruence invariant") {
  eegtl::Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 2 + static_cast<int>(rng.index(4));
    std::vector<Mat> rs, transformed;
    Mat p = random_invertible(rng, n);
    for (int i = 0; i < 6; ++i) {
      rs.push_back(random_spd(rng, n));
      Mat t = p * rs.back() * p.transpose();
      transformed.push_back(0.5 * (t + t.transpose()));
    }
    Mat m = eegtl::riemannian_mean(rs);
    Mat mt = eegtl::riemannian_mean(transformed);
    CHECK((mt - p * m * p.transpose()).norm() < 1e-6);
  }
}

TEST_CASE("riemannian_mean error cases") {
  CHECK_THROWS_AS(eegtl::riemannian_mean({}), eegtl::EmptyInputError);
  CHECK_THROWS_AS(
      eegtl::riemannian_mean({Mat::Identity(2, 2), Mat::Identity(3, 3)}),
      eegtl::DimensionError);

  // max_iter = 0 forces the no-convergence path; the exception carries the
  // residual the solver stopped at.
  eegtl::Rng rng(29);
  std::vector<Mat> rs;
  for (int i = 0; i < 4; ++i) rs.push_back(random_spd(rng, 3, 100.0));
  try {
    eegtl::riemannian_mean(rs, 1e-8, 0);
    FAIL("expected ConvergenceError");
  } catch (const eegtl::ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
}
