#include <catch2/catch_amalgamated.hpp>

#include "qfid/linalg.hpp"
#include "support.hpp"

using namespace qfid;
using Catch::Approx;

namespace {

// Random 4x4 unitary via Gram-Schmidt on gaussian columns; test-local, kept
// independent of the library (which has no 4x4 factorizations).
Mat4 random_unitary4(std::mt19937_64& rng) {
  std::array<std::array<cplx, 4>, 4> cols;
  for (auto& col : cols)
    for (cplx& v : col) v = cplx(testsupport::gaussian(rng), testsupport::gaussian(rng));
  for (int c = 0; c < 4; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      cplx proj(0);
      for (int r = 0; r < 4; ++r) proj += std::conj(cols[prev][r]) * cols[c][r];
      for (int r = 0; r < 4; ++r) cols[c][r] -= proj * cols[prev][r];
    }
    double n = 0;
    for (int r = 0; r < 4; ++r) n += std::norm(cols[c][r]);
    n = std::sqrt(n);
    for (int r = 0; r < 4; ++r) cols[c][r] /= n;
  }
  Mat4 q;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) q(r, c) = cols[c][r];
  return q;
}

Mat2 sigma(int j) { return Mat2::pauli(j); }

}  // namespace

TEST_CASE("mat2 products and traces", "[linalg]") {
  const Mat2 i2 = Mat2::identity();
  REQUIRE(max_abs_diff(i2 * i2, i2) == 0.0);
  REQUIRE(max_abs_diff(sigma(1) * sigma(2), cplx(0, 1) * sigma(3)) < 1e-15);
  REQUIRE(max_abs_diff(sigma(1) * sigma(1), i2) < 1e-15);

  REQUIRE(mat2_trace(i2) == cplx(2));
  REQUIRE(mat2_trace(sigma(3)) == cplx(0));
  for (int j = 1; j <= 3; ++j) REQUIRE(std::abs(mat2_trace(0.5 * sigma(j))) == 0.0);
}

TEST_CASE("pauli algebra relations", "[linalg]") {
  // sigma_j sigma_k = delta_jk I + i eps_jkl sigma_l on all index pairs.
  const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                            {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                            {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  for (int j = 1; j <= 3; ++j) {
    for (int k = 1; k <= 3; ++k) {
      Mat2 expected = j == k ? Mat2::identity() : Mat2::zero();
      for (int l = 1; l <= 3; ++l) {
        const int e = eps[j - 1][k - 1][l - 1];
        if (e != 0) expected = expected + cplx(0, e) * sigma(l);
      }
      REQUIRE(max_abs_diff(sigma(j) * sigma(k), expected) < 1e-15);
    }
  }
}

TEST_CASE("mat2 multiplication is associative", "[linalg]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Mat2 a = testsupport::random_mat2(rng);
    const Mat2 b = testsupport::random_mat2(rng);
    const Mat2 c = testsupport::random_mat2(rng);
    REQUIRE(max_abs_diff((a * b) * c, a * (b * c)) < 1e-12);
  }
}

TEST_CASE("herm2_sqrt on known matrices", "[linalg]") {
  REQUIRE(max_abs_diff(herm2_sqrt(Mat2::identity()), Mat2::identity()) < 1e-15);

  const Mat2 d41{{cplx(4), cplx(0), cplx(0), cplx(1)}};
  const Mat2 d21{{cplx(2), cplx(0), cplx(0), cplx(1)}};
  REQUIRE(max_abs_diff(herm2_sqrt(d41), d21) < 1e-14);

  // (I + 0.6 sx)/2 has eigenvalues 0.8, 0.2 on the +-x basis; the square
  // root follows from the same eigenbasis.
  const Mat2 rho = 0.5 * (Mat2::identity() + 0.6 * Mat2::pauli_x());
  const double a = 0.5 * (std::sqrt(0.8) + std::sqrt(0.2));
  const double b = 0.5 * (std::sqrt(0.8) - std::sqrt(0.2));
  const Mat2 expected{{cplx(a), cplx(b), cplx(b), cplx(a)}};
  const Mat2 s = herm2_sqrt(rho);
  REQUIRE(max_abs_diff(s, expected) < 1e-12);
  REQUIRE(max_abs_diff(s * s, rho) < 1e-12);
}

TEST_CASE("herm2_sqrt squares back on random PSD input", "[linalg]") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const Mat2 g = testsupport::random_mat2(rng);
    const Mat2 psd = g * g.adjoint();
    const Mat2 s = herm2_sqrt(psd);
    REQUIRE(s.is_hermitian(1e-10));
    REQUIRE(herm2_eigenvalues(s)[1] >= -1e-12);
    REQUIRE(max_abs_diff(s * s, psd) < 1e-9 * std::max(1.0, psd.max_abs()));
  }
}

TEST_CASE("herm2_sqrt clamps tiny negatives and rejects real ones", "[linalg]") {
  const Mat2 tiny{{cplx(1), cplx(0), cplx(0), cplx(-5e-11)}};
  const Mat2 s = herm2_sqrt(tiny);
  REQUIRE(std::abs(s.e[0].real() - 1.0) < 1e-10);
  REQUIRE(std::abs(s.e[3]) < 1e-5);

  const Mat2 bad{{cplx(1), cplx(0), cplx(0), cplx(-1e-3)}};
  REQUIRE_THROWS_AS(herm2_sqrt(bad), NotPsd);
  const Mat2 non_herm{{cplx(1), cplx(1), cplx(0), cplx(1)}};
  REQUIRE_THROWS_AS(herm2_sqrt(non_herm), NotPsd);
}

TEST_CASE("herm4_eigenvalues on diagonal and known spectra", "[linalg]") {
  Mat4 d;
  d(0, 0) = 4, d(1, 1) = 3, d(2, 2) = 2, d(3, 3) = 1;
  const auto ev = herm4_eigenvalues(d);
  REQUIRE(ev[0] == Approx(4).margin(1e-13));
  REQUIRE(ev[1] == Approx(3).margin(1e-13));
  REQUIRE(ev[2] == Approx(2).margin(1e-13));
  REQUIRE(ev[3] == Approx(1).margin(1e-13));
}

TEST_CASE("herm4_eigenvalues sum to trace and recover planted spectra", "[linalg]") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 40; ++rep) {
    std::array<double, 4> planted;
    for (double& v : planted) v = testsupport::uniform(rng, -3.0, 3.0);
    std::sort(planted.begin(), planted.end(), std::greater<>());
    const Mat4 q = random_unitary4(rng);
    Mat4 a;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        cplx v(0);
        for (int k = 0; k < 4; ++k) v += q(r, k) * planted[k] * std::conj(q(c, k));
        a(r, c) = v;
      }
    // Symmetrize rounding noise so the input honors the Herm4 invariant.
    for (int r = 0; r < 4; ++r) {
      a(r, r) = cplx(a(r, r).real(), 0);
      for (int c = r + 1; c < 4; ++c) {
        const cplx v = 0.5 * (a(r, c) + std::conj(a(c, r)));
        a(r, c) = v;
        a(c, r) = std::conj(v);
      }
    }
    const auto ev = herm4_eigenvalues(a);
    double sum = 0;
    for (int i = 0; i < 4; ++i) {
      sum += ev[i];
      REQUIRE(ev[i] == Approx(planted[i]).margin(1e-8));
    }
    REQUIRE(sum == Approx(a.trace().real()).margin(1e-9));
  }
}

TEST_CASE("herm4_eigenvalues rejects non-Hermitian input", "[linalg]") {
  Mat4 a;
  a(0, 1) = cplx(1, 0);
  REQUIRE_THROWS_AS(herm4_eigenvalues(a), NotHermitian);
}

TEST_CASE("quaternion_from_su2 on known rotations", "[linalg]") {
  const UnitQuaternion qi = quaternion_from_su2(Mat2::identity());
  REQUIRE(qi.w == Approx(1).margin(1e-14));

  const UnitQuaternion qx = quaternion_from_su2(cplx(0, -1) * Mat2::pauli_x());
  REQUIRE(qx.w == Approx(0).margin(1e-14));
  REQUIRE(qx.x == Approx(1).margin(1e-14));

  const UnitQuaternion qy = quaternion_from_su2(su2_rotation({0, 1, 0}, 0.5 * std::numbers::pi));
  REQUIRE(qy.w == Approx(std::cos(0.25 * std::numbers::pi)).margin(1e-14));
  REQUIRE(qy.x == Approx(0).margin(1e-14));
  REQUIRE(qy.y == Approx(std::sin(0.25 * std::numbers::pi)).margin(1e-14));
  REQUIRE(qy.z == Approx(0).margin(1e-14));

  REQUIRE_THROWS_AS(quaternion_from_su2(Mat2{{cplx(1), cplx(1), cplx(0), cplx(1)}}),
                    NotUnitary);
}

TEST_CASE("quaternion round trip reproduces the unitary up to phase", "[linalg]") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const Mat2 u = testsupport::random_unitary(rng);
    const Mat2 rec = su2_from_quaternion(quaternion_from_su2(u));
    REQUIRE(0.5 * std::abs((u.adjoint() * rec).trace()) == Approx(1).margin(1e-10));
  }
}

TEST_CASE("quaternion rotation matches SU(2) conjugation", "[linalg]") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 50; ++i) {
    const Mat2 u = testsupport::random_unitary(rng);
    const UnitQuaternion q = quaternion_from_su2(u);
    const Vec3 v{testsupport::gaussian(rng), testsupport::gaussian(rng),
                 testsupport::gaussian(rng)};
    // Conjugating v.sigma by u rotates v by the rotation of q.
    const Mat2 m = v.x * Mat2::pauli_x() + v.y * Mat2::pauli_y() + v.z * Mat2::pauli_z();
    const Mat2 img = u * m * u.adjoint();
    const Vec3 rv = q.rotate(v);
    REQUIRE(0.5 * (img * Mat2::pauli_x()).trace().real() == Approx(rv.x).margin(1e-10));
    REQUIRE(0.5 * (img * Mat2::pauli_y()).trace().real() == Approx(rv.y).margin(1e-10));
    REQUIRE(0.5 * (img * Mat2::pauli_z()).trace().real() == Approx(rv.z).margin(1e-10));
  }
}

TEST_CASE("quaternion sign convention", "[linalg]") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion q = quaternion_from_su2(testsupport::random_unitary(rng));
    if (q.w == 0.0) {
      const double first = q.x != 0.0 ? q.x : (q.y != 0.0 ? q.y : q.z);
      REQUIRE(first >= 0.0);
    } else {
      REQUIRE(q.w > 0.0);
    }
    REQUIRE(q.dot(q) == Approx(1).margin(1e-12));
  }
}
