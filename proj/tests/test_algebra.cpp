#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "g2vertex/algebra.hpp"

using namespace g2v;

namespace {
Mat7 comm(const Mat7& a, const Mat7& b) { return a * b - b * a; }
}

TEST_CASE("cartan generators") {
  const CartanSet c = build_cartan();
  Eigen::Matrix<double, 7, 1> d1, d2;
  d1 << 1, 0, 1, 0, -1, 0, -1;
  d2 << 0, 1, -1, 0, 1, -1, 0;
  CHECK(max_abs(c.h_aux1 - Mat7(d1.asDiagonal())) == 0.0);
  CHECK(max_abs(c.h_aux2 - Mat7(d2.asDiagonal())) == 0.0);

  Eigen::Matrix<double, 7, 1> h1;
  h1 << 1, 1, 0, 0, 0, -1, -1;
  CHECK(max_abs(c.h1 - Mat7(h1.asDiagonal())) == 0.0);
  CHECK(c.h1.trace() == doctest::Approx(0.0).epsilon(0.0));
  CHECK(std::abs(c.h2.trace()) < 1e-15);
  // diagonal and traceless
  CHECK(max_abs(c.h2 - Mat7(c.h2.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("root generators from commutators") {
  const auto e = build_root_generators();
  CHECK(e[0](3, 0) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(e[1](0, 5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  // strictly triangular-patterned: no diagonal entries
  for (const Mat7& g : e)
    for (int i = 0; i < 7; ++i) CHECK(g(i, i) == 0.0);

  // E6 re-derived along the nested commutator path
  const Mat7 e3 = comm(e[0], e[1]) / std::sqrt(2.0);
  const Mat7 e4 = std::sqrt(3.0 / 8.0) * comm(e[0], e3);
  const Mat7 e5 = comm(e[0], e4) / std::sqrt(2.0);
  const Mat7 e6 = comm(e[1], e5) / std::sqrt(2.0);
  CHECK(max_abs(e6 - e[5]) < 1e-14);
}

TEST_CASE("every root generator carries a fixed root vector") {
  const G2Algebra& alg = G2Algebra::instance();
  const CartanSet& c = alg.cartan();
  for (int l = 0; l < 6; ++l) {
    const Mat7& e = alg.roots()[l];
    const Eigen::Vector2d alpha = alg.root_vector(l);
    CHECK(max_abs(comm(c.h1, e) - alpha(0) * e) < 1e-12);
    CHECK(max_abs(comm(c.h2, e) - alpha(1) * e) < 1e-12);
  }
  // the simple roots: alpha_1 = (-1, -1/sqrt3), alpha_2 = (2, 0)
  CHECK(alg.root_vector(0)(0) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(alg.root_vector(0)(1) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(alg.root_vector(1)(0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(alg.root_vector(1)(1)) < 1e-13);
}

TEST_CASE("casimir structure") {
  const G2Algebra& alg = G2Algebra::instance();
  const Mat49& c = alg.casimir();
  CHECK(max_abs(c - c.transpose()) < 1e-14);
  const Mat49& p = swap_operator();
  CHECK(max_abs(p * c * p - c) < 1e-14);

  // four distinct eigenvalues with multiplicities 1, 7, 14, 27
  Eigen::SelfAdjointEigenSolver<Mat49> es(c);
  std::vector<int> mult;
  double prev = es.eigenvalues()(0);
  int count = 1;
  for (int i = 1; i < 49; ++i) {
    if (es.eigenvalues()(i) - prev > 1e-6) {
      mult.push_back(count);
      count = 0;
    }
    prev = es.eigenvalues()(i);
    ++count;
  }
  mult.push_back(count);
  std::sort(mult.begin(), mult.end());
  REQUIRE(mult.size() == 4);
  CHECK(mult[0] == 1);
  CHECK(mult[1] == 7);
  CHECK(mult[2] == 14);
  CHECK(mult[3] == 27);
}

TEST_CASE("casimir commutes with the coproduct of every generator") {
  const G2Algebra& alg = G2Algebra::instance();
  const Mat49& c = alg.casimir();
  const Mat7 id = Mat7::Identity();
  auto check = [&](const Mat7& g) {
    const Mat49 cop = kron(g, id) + kron(id, g);
    CHECK(max_abs(c * cop - cop * c) < 1e-10);
  };
  check(alg.cartan().h1);
  check(alg.cartan().h2);
  for (int l = 0; l < 6; ++l) {
    check(alg.roots()[l]);
    check(alg.roots_transposed()[l]);
  }
}

TEST_CASE("projector family") {
  const G2Algebra& alg = G2Algebra::instance();
  const double tol = 1e-10 * kPairDim;
  for (int a = 0; a < 4; ++a) {
    const int da = G2Algebra::irrep_dims[a];
    CHECK(alg.projector(da).trace() == doctest::Approx(da).epsilon(1e-12));
    for (int b = 0; b < 4; ++b) {
      const int db = G2Algebra::irrep_dims[b];
      const Mat49 prod = alg.projector(da) * alg.projector(db);
      if (a == b)
        CHECK(max_abs(prod - alg.projector(da)) < tol);
      else
        CHECK(max_abs(prod) < tol);
    }
  }
  const Mat49 sum = alg.projector(1) + alg.projector(7) + alg.projector(14) + alg.projector(27);
  CHECK(max_abs(sum - Mat49::Identity()) < tol);
  CHECK_THROWS_AS((void)alg.projector(2), std::out_of_range);
}

TEST_CASE("spectral reconstruction: polynomial vs Lagrange projectors") {
  const G2Algebra& alg = G2Algebra::instance();
  const auto lagrange = alg.lagrange_projectors();
  for (int k = 0; k < 4; ++k)
    CHECK(max_abs(lagrange[static_cast<size_t>(k)] -
                  alg.projector(G2Algebra::irrep_dims[k])) < 1e-10);
}

TEST_CASE("matrix dump round trip at 17 significant digits") {
  const G2Algebra& alg = G2Algebra::instance();
  std::stringstream buffer;
  write_matrix(buffer, alg.casimir());
  const Eigen::MatrixXd back = read_matrix(buffer);
  REQUIRE(back.rows() == 49);
  REQUIRE(back.cols() == 49);
  CHECK(max_abs(back - alg.casimir()) == 0.0);
}
