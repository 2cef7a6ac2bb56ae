#include <doctest.h>

#include <qstat/builders.hpp>
#include <qstat/errors.hpp>
#include <qstat/measurement.hpp>
#include <qstat/statistics.hpp>

#include <filesystem>
#include <map>
#include <random>

#include "test_support.hpp"

using namespace qstat;
using ts::I;
using Mode = EstimateAssignment::Mode;

namespace {

Povm sigma_x_povm() {
  return make_povm({{"plus", projector(ts::ket_plus())}, {"minus", projector(ts::ket_minus())}});
}

Povm sigma_z_povm() {
  return make_povm({{"0", projector(ts::ket0())}, {"1", projector(ts::ket1())}});
}

}  // namespace

TEST_CASE("validate_povm") {
  auto r = validate_povm(sigma_x_povm());
  CHECK(r.pass);
  CHECK(r.completeness_deviation < 1e-14);
  CHECK(r.positivity_deviation < 1e-14);

  // non-projective split of the identity is fine
  Povm blend;
  blend.outcomes.push_back({"a", 0.6 * Matrix::Identity(3, 3)});
  blend.outcomes.push_back({"b", 0.4 * Matrix::Identity(3, 3)});
  CHECK(validate_povm(blend).pass);

  Povm incomplete;
  incomplete.outcomes.push_back({"0", projector(ts::ket0())});
  incomplete.outcomes.push_back({"1", 0.5 * projector(ts::ket1())});
  auto bad = validate_povm(incomplete);
  CHECK_FALSE(bad.pass);
  CHECK(bad.completeness_deviation == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(make_povm(incomplete.outcomes), Error);

  Povm indefinite;
  indefinite.outcomes.push_back({"a", 1.5 * projector(ts::ket0()) - 0.5 * projector(ts::ket1())});
  indefinite.outcomes.push_back(
      {"b", Matrix(Matrix::Identity(2, 2) - indefinite.outcomes[0].element)});
  auto neg = validate_povm(indefinite);
  CHECK_FALSE(neg.pass);
  CHECK(neg.positivity_deviation == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(validate_povm(Povm{}), Error);

  Povm mixed;
  mixed.outcomes.push_back({"a", Matrix::Identity(2, 2)});
  mixed.outcomes.push_back({"b", Matrix::Zero(3, 3)});
  CHECK_THROWS_AS(validate_povm(mixed), Error);
}

TEST_CASE("projective_povm and outcome lookup") {
  auto p = projective_povm(standard_basis(3));
  REQUIRE(p.outcomes.size() == 3);
  CHECK(p.outcomes[1].label == "1");
  CHECK(ts::max_abs_diff(p.find("2").element, projector(ts::sv({0.0, 0.0, 1.0}))) < 1e-15);
  CHECK_THROWS_AS(p.find("missing"), Error);
  CHECK(validate_povm(p).pass);
}

TEST_CASE("povm_probability") {
  CHECK(povm_probability(Matrix::Identity(2, 2), ts::ket_plus()) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(povm_probability(projector(ts::ket0()), ts::ket_plus()) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(povm_probability(Matrix::Zero(2, 2), ts::ket0()) == 0.0);

  // valid elements can still assign probability outside [0,1]
  CHECK_THROWS_AS(povm_probability(Matrix(2.0 * Matrix::Identity(2, 2)), ts::ket0()), Error);

  Matrix skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(povm_probability(skew, ts::ket0()), Error);

  // probabilities over a POVM sum to one
  auto p = sigma_x_povm();
  auto psi = random_state(2, 170);
  double total = 0;
  for (const auto& o : p.outcomes) total += povm_probability(o.element, psi);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("make_estimates modes") {
  CHECK_NOTHROW(make_estimates(Mode::complex_valued, {{"0", Complex(1.0, 2.0)}}));
  CHECK_NOTHROW(make_estimates(Mode::real_restricted, {{"0", Complex(1.0, 0.0)}}));
  CHECK_THROWS_AS(make_estimates(Mode::real_restricted, {{"0", Complex(1.0, 0.1)}}), Error);
}

TEST_CASE("ozawa_error canonical cases") {
  // measuring along x tells nothing wrong about sigma_z on |0>: both weak
  // values are 1, so the constant estimate 1 gives exactly zero error
  auto est1 = make_estimates(Mode::real_restricted, {{"plus", 1.0}, {"minus", 1.0}});
  CHECK(ozawa_error(pauli_z(), sigma_x_povm(), est1, ts::ket0()) == 0.0);

  // estimating 0 for sigma_z on |+> costs exactly <sigma_z^2> = 1
  auto est0 = make_estimates(Mode::real_restricted, {{"0", 0.0}, {"1", 0.0}});
  CHECK(ozawa_error(pauli_z(), sigma_z_povm(), est0, ts::ket_plus()) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // measuring the observable's own eigenbasis with eigenvalue estimates
  Matrix a = random_hermitian(4, 180);
  auto spec = eigendecompose(a);
  std::vector<Povm::Outcome> outs;
  std::map<std::string, Complex> vals;
  for (int n = 0; n < 4; ++n) {
    outs.push_back({std::to_string(n), projector(spec.eigenstate(n))});
    vals[std::to_string(n)] = spec.values[n];
  }
  auto exact = make_estimates(Mode::complex_valued, vals);
  // zero up to rounding in the d^2-term quadratic form
  CHECK(ozawa_error(a, make_povm(outs), exact, random_state(4, 181)) < 1e-12);

  auto missing = make_estimates(Mode::complex_valued, {{"plus", 1.0}});
  CHECK_THROWS_AS(ozawa_error(pauli_z(), sigma_x_povm(), missing, ts::ket0()), Error);
}

TEST_CASE("ozawa_error equals the summed squared contributions for projective POVMs") {
  for (unsigned seed : {190u, 191u, 192u}) {
    int dim = 2 + int(seed % 5);
    Matrix a = random_hermitian(dim, seed);
    auto psi = random_state(dim, seed + 1);
    Basis mb = random_basis(dim, seed + 2);

    std::vector<Povm::Outcome> outs;
    std::map<std::string, Complex> vals;
    std::mt19937_64 rng(seed + 3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < dim; ++k) {
      outs.push_back({std::to_string(k), projector(mb.vec(k))});
      vals[std::to_string(k)] = Complex(u(rng), u(rng));
    }
    auto est = make_estimates(Mode::complex_valued, vals);
    double eps2 = ozawa_error(a, make_povm(outs), est, psi);

    double summed = 0;
    for (int k = 0; k < dim; ++k)
      summed += std::norm(
          error_contribution(a, mb.vec(k), vals[std::to_string(k)], psi));
    CHECK(eps2 == doctest::Approx(summed).epsilon(1e-12));
    CHECK(eps2 >= 0.0);
  }
}

TEST_CASE("error_contribution") {
  // <0|sz|+> - est <0|+> with est = 0
  Complex c = error_contribution(pauli_z(), ts::ket0(), 0.0, ts::ket_plus());
  CHECK(std::abs(c - Complex(1.0 / std::sqrt(2.0))) < 1e-14);

  // the weak value is exactly the estimate that silences an outcome
  auto w = weak_value(pauli_z(), ts::ket_plus(), ts::ket0());
  CHECK(std::abs(error_contribution(pauli_z(), ts::ket0(), w.value, ts::ket_plus())) < 1e-14);

  // orthogonal outcome whose channel the observable does not repopulate
  CHECK(std::abs(error_contribution(pauli_z(), ts::ket1(), 0.7, ts::ket0())) < 1e-15);
}

TEST_CASE("optimal_estimate modes and the real-restricted floor") {
  // eigenstate preparation pins both modes to the eigenvalue
  for (auto mode : {Mode::complex_valued, Mode::real_restricted}) {
    CHECK(std::abs(optimal_estimate(pauli_z(), ts::ket_plus(), ts::ket0(), mode) -
                   Complex(1.0)) < 1e-14);
  }

  Matrix a = random_hermitian(3, 200);
  auto psi = random_state(3, 201);
  auto m = random_state(3, 202);
  Complex wv = optimal_estimate(a, m, psi, Mode::complex_valued);
  Complex re = optimal_estimate(a, m, psi, Mode::real_restricted);
  CHECK(re.imag() == 0.0);
  CHECK(re.real() == doctest::Approx(wv.real()).epsilon(1e-14));
  CHECK(std::abs(error_contribution(a, m, wv, psi)) < 1e-13);

  // the real part minimizes |contribution| over real estimates
  double at_opt = std::norm(error_contribution(a, m, re, psi));
  for (double d : {-1e-3, 1e-3, -0.1, 0.1}) {
    double shifted = std::norm(error_contribution(a, m, re + Complex(d, 0.0), psi));
    CHECK(at_opt <= shifted + 1e-15);
  }

  CHECK_THROWS_AS(optimal_estimate(pauli_z(), ts::ket1(), ts::ket0(), Mode::complex_valued),
                  Error);
}

TEST_CASE("real-restricted residual is the imaginary weak-value weight") {
  for (unsigned seed : {210u, 211u}) {
    int dim = 3;
    Matrix a = random_hermitian(dim, seed);
    auto psi = random_state(dim, seed + 1);
    Basis mb = random_basis(dim, seed + 2);

    std::vector<Povm::Outcome> outs;
    std::map<std::string, Complex> vals;
    double residual = 0;
    for (int k = 0; k < dim; ++k) {
      auto mk = mb.vec(k);
      outs.push_back({std::to_string(k), projector(mk)});
      Complex wv = optimal_estimate(a, mk, psi, Mode::complex_valued);
      vals[std::to_string(k)] = Complex(wv.real(), 0.0);
      residual += wv.imag() * wv.imag() * std::norm(overlap(mk, psi));
    }
    auto est = make_estimates(Mode::real_restricted, vals);
    double eps2 = ozawa_error(a, make_povm(outs), est, psi);
    CHECK(eps2 == doctest::Approx(residual).epsilon(1e-12));
  }
}

TEST_CASE("joint_quasiprobability values and marginals") {
  // identity element reduces to the Born weight of a
  auto psi = random_state(3, 220);
  auto a = random_state(3, 221);
  CHECK(joint_quasiprobability(Matrix::Identity(3, 3), a, psi) ==
        doctest::Approx(std::norm(overlap(a, psi))).epsilon(1e-12));

  // a negative cell: projecting along minus while conditioning on
  // |0> against a state tilted past the diagonal
  auto tilted = ts::sv({std::cos(3 * ts::pi / 8), std::sin(3 * ts::pi / 8)});
  double q = joint_quasiprobability(projector(ts::ket_minus()), ts::ket0(), tilted);
  double c = std::cos(3 * ts::pi / 8), s = std::sin(3 * ts::pi / 8);
  CHECK(q == doctest::Approx(c * (c - s) / 2.0).epsilon(1e-12));
  CHECK(q < -0.1);

  // marginal over a recovers the POVM probability, over m the Born weight
  auto povm = sigma_x_povm();
  auto psi2 = random_state(2, 222);
  Basis basis = random_basis(2, 223);
  for (const auto& o : povm.outcomes) {
    double sum = 0;
    for (int k = 0; k < 2; ++k)
      sum += joint_quasiprobability(o.element, basis.vec(k), psi2);
    CHECK(sum == doctest::Approx(povm_probability(o.element, psi2)).epsilon(1e-12));
  }
  for (int k = 0; k < 2; ++k) {
    double sum = 0;
    for (const auto& o : povm.outcomes)
      sum += joint_quasiprobability(o.element, basis.vec(k), psi2);
    CHECK(sum == doctest::Approx(std::norm(overlap(basis.vec(k), psi2))).epsilon(1e-12));
  }
}

TEST_CASE("deterministic_value") {
  // both slots eigenstates of the respective summands: values add
  Complex two = deterministic_value(pauli_z() + pauli_x(), ts::ket0(), ts::ket_plus());
  CHECK(std::abs(two - Complex(2.0)) < 1e-14);

  // preparation in an eigenstate fixes the value regardless of outcome
  Matrix b = random_hermitian(4, 230);
  auto spec = eigendecompose(b);
  auto psi = spec.eigenstate(2);
  for (unsigned seed : {231u, 232u, 233u}) {
    auto m = random_state(4, seed);
    CHECK(std::abs(deterministic_value(b, psi, m) - Complex(spec.values[2])) < 1e-11);
  }

  // three boxes: the value of the third box is -1
  auto pre = ts::sv({1.0, 1.0, 1.0});
  auto post = ts::sv({1.0, 1.0, -1.0});
  CHECK(std::abs(deterministic_value(projector(ts::sv({0.0, 0.0, 1.0})), pre, post) -
                 Complex(-1.0)) < 1e-13);

  // additivity over sums, term by term
  Matrix b2 = random_hermitian(4, 234);
  auto m = random_state(4, 235);
  auto prep = random_state(4, 236);
  Complex lhs = deterministic_value(b + b2, prep, m);
  Complex rhs = deterministic_value(b, prep, m) + deterministic_value(b2, prep, m);
  CHECK(std::abs(lhs - rhs) < 1e-11);
}

TEST_CASE("expectation_from_deterministic reproduces the trace rule") {
  for (int dim : {2, 3, 5}) {
    Matrix a = random_hermitian(dim, 240 + unsigned(dim));
    auto rho = random_density(dim, 250 + unsigned(dim));
    Basis bp = standard_basis(dim);
    Basis bm(fourier_basis(dim).cols);
    Complex got = expectation_from_deterministic(a, rho, bp, bm);
    Complex want = expectation(a, rho);
    CHECK(std::abs(got - want) < 1e-9);
  }

  Complex unit = expectation_from_deterministic(
      Matrix::Identity(3, 3), DensityOperator(ts::maximally_mixed(3)), standard_basis(3),
      Basis(fourier_basis(3).cols));
  CHECK(std::abs(unit - Complex(1.0)) < 1e-12);

  // orthogonal basis pairs block the assignment
  Basis s = standard_basis(2);
  CHECK_THROWS_AS(
      expectation_from_deterministic(pauli_z(), DensityOperator(ts::maximally_mixed(2)), s, s),
      Error);
}

TEST_CASE("povm json round trip") {
  auto p = sigma_x_povm();
  std::string text = povm_to_json_text(p);
  auto back = povm_from_json_text(text);
  REQUIRE(back.outcomes.size() == 2);
  CHECK(back.outcomes[0].label == "plus");
  CHECK(ts::max_abs_diff(back.outcomes[0].element, p.outcomes[0].element) == 0.0);
  CHECK(povm_to_json_text(back) == text);

  auto dir = std::filesystem::temp_directory_path() / "qstat_povm_test";
  std::filesystem::create_directories(dir);
  auto file = (dir / "p.json").string();
  save_povm_file(p, file);
  auto loaded = load_povm_file(file);
  CHECK(ts::max_abs_diff(loaded.outcomes[1].element, p.outcomes[1].element) == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("povm json schema errors") {
  CHECK_THROWS_AS(povm_from_json_text("not json"), Error);
  CHECK_THROWS_AS(povm_from_json_text("{}"), Error);
  CHECK_THROWS_AS(povm_from_json_text(R"({"dim": 0, "outcomes": []})"), Error);
  CHECK_THROWS_AS(povm_from_json_text(R"({"dim": 2, "outcomes": []})"), Error);
  CHECK_THROWS_AS(
      povm_from_json_text(R"({"dim": 2, "outcomes": [{"label": "a", "matrix": [[1, 0]]}]})"),
      Error);
  CHECK_THROWS_AS(povm_from_json_text(
                      R"({"dim": 1, "outcomes": [{"label": "a", "matrix": [["x", 0]]}]})"),
                  Error);
  // schema-valid but incomplete: construction fails validation
  CHECK_THROWS_AS(povm_from_json_text(
                      R"({"dim": 1, "outcomes": [{"label": "a", "matrix": [[0.5, 0]]}]})"),
                  Error);
  CHECK_NOTHROW(povm_from_json_text(
      R"({"dim": 1, "outcomes": [{"label": "a", "matrix": [[1.0, 0]]}]})"));
}
