#include "g2vertex/rmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace g2v {

namespace {

// Monic cubic (x - r0)(x - r1)(x - r2) as coefficients of x^0..x^3.
std::array<double, 4> cubic_from_roots(double r0, double r1, double r2) {
  return {-r0 * r1 * r2, r0 * r1 + r0 * r2 + r1 * r2, -(r0 + r1 + r2), 1.0};
}

using Mat343c = Eigen::MatrixXcd;

// Embeddings into the triple product V1 (x) V2 (x) V3, index 49a + 7b + c.
Mat343c embed12(const Mat49c& r) {
  Mat343c m = Mat343c::Zero(343, 343);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int ap = 0; ap < 7; ++ap)
        for (int bp = 0; bp < 7; ++bp) {
          const Complex v = r(7 * ap + bp, 7 * a + b);
          if (v == Complex(0)) continue;
          for (int c = 0; c < 7; ++c) m(49 * ap + 7 * bp + c, 49 * a + 7 * b + c) = v;
        }
  return m;
}

Mat343c embed23(const Mat49c& r) {
  Mat343c m = Mat343c::Zero(343, 343);
  for (int b = 0; b < 7; ++b)
    for (int c = 0; c < 7; ++c)
      for (int bp = 0; bp < 7; ++bp)
        for (int cp = 0; cp < 7; ++cp) {
          const Complex v = r(7 * bp + cp, 7 * b + c);
          if (v == Complex(0)) continue;
          for (int a = 0; a < 7; ++a) m(49 * a + 7 * bp + cp, 49 * a + 7 * b + c) = v;
        }
  return m;
}

Mat343c embed13(const Mat49c& r) {
  Mat343c m = Mat343c::Zero(343, 343);
  for (int a = 0; a < 7; ++a)
    for (int c = 0; c < 7; ++c)
      for (int ap = 0; ap < 7; ++ap)
        for (int cp = 0; cp < 7; ++cp) {
          const Complex v = r(7 * ap + cp, 7 * a + c);
          if (v == Complex(0)) continue;
          for (int b = 0; b < 7; ++b) m(49 * ap + 7 * b + cp, 49 * a + 7 * b + c) = v;
        }
  return m;
}

Mat49 partial_transpose2(const Mat49& m) {
  Mat49 out;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int d = 0; d < 7; ++d) out(7 * a + b, 7 * c + d) = m(7 * a + d, 7 * c + b);
  return out;
}

}  // namespace

RMatrix::RMatrix(const G2Algebra& algebra) : algebra_(&algebra) {
  // rho0 * f_k expanded: each projector multiplies a monic cubic.
  const auto c27 = cubic_from_roots(-1, -4, -6);
  const auto c14 = cubic_from_roots(1, -4, -6);
  const auto c7 = cubic_from_roots(-1, 4, -6);
  const auto c0 = cubic_from_roots(1, 6, -4);
  for (int k = 0; k < 4; ++k) {
    coeff_[k] = c27[k] * algebra.projector(27) + c14[k] * algebra.projector(14) +
                c7[k] * algebra.projector(7) + c0[k] * algebra.projector(1);
  }
}

Mat49 RMatrix::operator()(double lambda) const {
  return coeff_[0] + lambda * (coeff_[1] + lambda * (coeff_[2] + lambda * coeff_[3]));
}

Mat49c RMatrix::operator()(Complex lambda) const {
  Mat49c out = coeff_[3].cast<Complex>();
  out = lambda * out + coeff_[2].cast<Complex>();
  out = lambda * out + coeff_[1].cast<Complex>();
  out = lambda * out + coeff_[0].cast<Complex>();
  return out;
}

Mat49 RMatrix::from_projectors(double lambda) const {
  const G2Algebra& alg = *algebra_;
  return (lambda + 1) * (lambda + 4) * (lambda + 6) * alg.projector(27) +
         (lambda - 1) * (lambda + 4) * (lambda + 6) * alg.projector(14) +
         (lambda + 1) * (lambda - 4) * (lambda + 6) * alg.projector(7) +
         (lambda - 1) * (lambda - 6) * (lambda + 4) * alg.projector(1);
}

Mat7 crossing_matrix() {
  Mat7 v = Mat7::Zero();
  for (int i = 0; i < 7; ++i) v(i, 6 - i) = (i % 2 == 0) ? 1.0 : -1.0;
  return v;
}

double yang_baxter_residual(const RMatrix& r, Complex lambda1, Complex lambda2) {
  const Mat49c r12 = r(lambda1 - lambda2);
  const Mat49c r13 = r(lambda1);
  const Mat49c r23 = r(lambda2);
  const Mat343c m12 = embed12(r12);
  const Mat343c m13 = embed13(r13);
  const Mat343c m23 = embed23(r23);
  const Mat343c lhs = m12 * m13 * m23;
  const Mat343c rhs = m23 * m13 * m12;
  const double scale = max_abs(r12) * max_abs(r13) * max_abs(r23);
  return max_abs(lhs - rhs) / std::max(scale, 1e-300);
}

double ScatteringReport::max() const {
  return std::max({unitarity, parity, temporal, crossing});
}

ScatteringReport verify_scattering_properties(const RMatrix& r, double lambda) {
  const Mat49& p = swap_operator();
  const Mat49 rp = r(lambda);
  const Mat49 rm = r(-lambda);
  const double scale = max_abs(rp);

  ScatteringReport rep{};
  const Mat49 r21 = p * rm * p;
  rep.unitarity = max_abs(rp * r21 - RMatrix::rho0(lambda) * RMatrix::rho0(-lambda) *
                                         Mat49::Identity()) /
                  (scale * max_abs(rm));
  rep.parity = max_abs(p * rp * p - rp) / scale;
  rep.temporal = max_abs(rp.transpose() - rp) / scale;

  const Mat7 v = crossing_matrix();
  const Mat49 v1 = kron(v, Mat7::Identity());
  const Mat49 v1inv = kron(Mat7(v.inverse()), Mat7::Identity());
  const Mat49 rx = partial_transpose2(r(-6.0 - lambda));
  rep.crossing = max_abs(rp + v1 * rx * v1inv) / scale;
  return rep;
}

double invariance_residual(const RMatrix& r, double lambda) {
  const Mat49 rl = r(lambda);
  const Mat7 id = Mat7::Identity();
  double worst = 0.0;
  auto check = [&](const Mat7& g) {
    const Mat49 cop = kron(g, id) + kron(id, g);
    const double denom = std::max(max_abs(rl) * max_abs(cop), 1e-300);
    worst = std::max(worst, max_abs(rl * cop - cop * rl) / denom);
  };
  const G2Algebra& alg = r.algebra();
  check(alg.cartan().h1);
  check(alg.cartan().h2);
  for (int l = 0; l < 6; ++l) {
    check(alg.roots()[l]);
    check(alg.roots_transposed()[l]);
  }
  return worst;
}

}  // namespace g2v
