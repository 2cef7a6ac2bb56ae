#include <doctest.h>

#include <qstat/builders.hpp>
#include <qstat/errors.hpp>
#include <qstat/hilbert.hpp>

#include "test_support.hpp"

using namespace qstat;
using ts::I;

TEST_CASE("validate_operator accepts and rejects by kind") {
  const Matrix sx = pauli_x();
  const Matrix sz = pauli_z();

  CHECK(validate_operator(sx, OperatorKind::hermitian).pass);
  CHECK(validate_operator(sz, OperatorKind::unitary).pass);
  CHECK(validate_operator(ts::maximally_mixed(2), OperatorKind::density).pass);
  CHECK(validate_operator(Matrix::Zero(3, 3), OperatorKind::povm_element).pass);

  Matrix skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;  // antisymmetric real, not Hermitian
  auto r = validate_operator(skew, OperatorKind::hermitian);
  CHECK_FALSE(r.pass);
  CHECK(r.deviation > 0.5);

  Matrix stretch = 2.0 * Matrix::Identity(2, 2);
  CHECK_FALSE(validate_operator(stretch, OperatorKind::unitary).pass);

  Matrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;  // trace one but indefinite
  CHECK_FALSE(validate_operator(negative, OperatorKind::density).pass);
  CHECK_FALSE(validate_operator(negative, OperatorKind::povm_element).pass);

  Matrix half_trace = 0.25 * Matrix::Identity(2, 2);
  CHECK_FALSE(validate_operator(half_trace, OperatorKind::density).pass);
  CHECK(validate_operator(half_trace, OperatorKind::povm_element).pass);

  CHECK_THROWS_AS(validate_operator(Matrix(), OperatorKind::hermitian), Error);
  ValidityReport oblong = validate_operator(Matrix::Zero(2, 3), OperatorKind::hermitian);
  CHECK_FALSE(oblong.pass);
  CHECK(oblong.detail == "not square");
}

TEST_CASE("hermiticity deviation scales with operator magnitude") {
  // A 1e-8 asymmetry on a 1e6-sized operator is relative noise, not a failure.
  Matrix big = 1e6 * Matrix::Identity(2, 2);
  big(0, 1) = Complex(0.0, 1e-8);
  CHECK(is_hermitian(big));

  Matrix small = Matrix::Zero(2, 2);
  small(0, 1) = Complex(0.0, 1e-8);
  CHECK_FALSE(is_hermitian(small));
}

TEST_CASE("eigendecompose orders values and fixes phases") {
  auto spec = eigendecompose(pauli_z());
  CHECK(spec.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(spec.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  // ascending order puts |1> first; leading nonzero amplitude is real positive
  CHECK(std::abs(spec.vectors(1, 0) - 1.0) < 1e-14);
  CHECK(std::abs(spec.vectors(0, 1) - 1.0) < 1e-14);

  auto sx = eigendecompose(pauli_x());
  CHECK(sx.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sx.vectors(0, 0).real() > 0.0);
  CHECK(sx.vectors(0, 0).imag() == doctest::Approx(0.0));
  CHECK(std::abs(sx.vectors(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(sx.vectors(1, 0) + 1.0 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("eigendecompose clusters degenerate levels") {
  auto spec = eigendecompose(Matrix::Identity(3, 3));
  REQUIRE(spec.groups.size() == 1);
  CHECK(spec.groups[0].size() == 3);

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, 1.0, 2.0;
  auto two = eigendecompose(d);
  REQUIRE(two.groups.size() == 2);
  CHECK(two.groups[0].size() == 2);
  CHECK(two.group_of(0) == two.group_of(1));
  CHECK(two.group_of(2) == 1);
}

TEST_CASE("eigendecompose is deterministic and reconstructs the input") {
  for (int dim : {2, 5, 9, 16}) {
    Matrix m = random_hermitian(dim, 40 + dim);
    auto a = eigendecompose(m);
    auto b = eigendecompose(m);
    CHECK(a.values == b.values);
    CHECK(a.vectors.cwiseEqual(b.vectors).all());

    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    CHECK(ts::max_abs_diff(reconstruct(a), m) <= 1e-9 * scale);
    CHECK(ts::max_abs_diff(a.vectors.adjoint() * a.vectors,
                           Matrix::Identity(dim, dim)) < 1e-10);
    for (int n = 0; n < dim; ++n) {
      CHECK(a.eigenstate(n).amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("commutator algebra") {
  const Matrix sx = pauli_x();
  const Matrix sy = pauli_y();
  const Matrix sz = pauli_z();

  CHECK(ts::max_abs_diff(commutator(sx, sz), Complex(0.0, -2.0) * sy) < 1e-14);
  CHECK(ts::max_abs_diff(commutator(sz, sx), -commutator(sx, sz)) < 1e-14);
  CHECK(commutator(sx, sx).cwiseAbs().maxCoeff() == 0.0);
  CHECK(commutator(sx, Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(commutator(sx, Matrix::Identity(3, 3)), Error);
}

TEST_CASE("expectation values") {
  auto rho0 = ts::pure(ts::ket0());
  CHECK(expectation(pauli_z(), rho0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(expectation(pauli_z(), DensityOperator(ts::maximally_mixed(2)))) < 1e-15);

  // non-Hermitian product picks up an imaginary part
  auto yplus = ts::pure(ts::ket_yplus());
  Complex c = expectation(Matrix(pauli_x() * pauli_z()), yplus);
  CHECK(c.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(c.imag() == doctest::Approx(-1.0).epsilon(1e-14));

  auto rho = random_density(5, 7);
  Matrix herm = random_hermitian(5, 8);
  CHECK(std::abs(expectation(herm, rho).imag()) < 1e-12);
}

TEST_CASE("projector properties") {
  CHECK(ts::max_abs_diff(projector(ts::ket0()), (Matrix(2, 2) << 1, 0, 0, 0).finished()) < 1e-15);
  Matrix half = Matrix::Constant(2, 2, 0.5);
  CHECK(ts::max_abs_diff(projector(ts::ket_plus()), half) < 1e-15);

  for (unsigned seed : {1u, 2u, 3u}) {
    auto s = random_state(6, seed);
    Matrix p = projector(s);
    CHECK(ts::max_abs_diff(p * p, p) < 1e-12);
    CHECK(std::abs(p.trace() - 1.0) < 1e-12);
    CHECK(is_hermitian(p));
  }
}

TEST_CASE("overlap conjugates its first argument") {
  CHECK(std::abs(overlap(ts::ket0(), ts::ket0()) - 1.0) < 1e-15);
  CHECK(std::abs(overlap(ts::ket0(), ts::ket1())) < 1e-15);
  CHECK(std::abs(overlap(ts::ket0(), ts::ket_plus()) - 1.0 / std::sqrt(2.0)) < 1e-15);

  Complex fwd = overlap(ts::ket1(), ts::ket_yplus());
  CHECK(std::abs(fwd - I / std::sqrt(2.0)) < 1e-15);
  Complex bwd = overlap(ts::ket_yplus(), ts::ket1());
  CHECK(std::abs(bwd - std::conj(fwd)) < 1e-15);
}

TEST_CASE("state and density constructors enforce their invariants") {
  Vector unnorm(2);
  unnorm << 1.0, 1.0;
  CHECK_THROWS_AS(StateVector{unnorm}, Error);

  Matrix skew(2, 2);
  skew << 0.5, Complex(0.0, 0.3), Complex(0.0, 0.3), 0.5;
  CHECK_THROWS_AS(DensityOperator{skew}, Error);

  Matrix indefinite(2, 2);
  indefinite << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityOperator{indefinite}, Error);

  Matrix low_trace = 0.25 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator{low_trace}, Error);

  CHECK_NOTHROW(DensityOperator{ts::maximally_mixed(4)});

  Matrix cols(2, 2);
  cols << 1.0, 1.0, 0.0, 1.0;  // second column not orthogonal to first
  CHECK_THROWS_AS(Basis{cols}, Error);
  CHECK_NOTHROW(Basis{fourier_basis(5).cols});
}
