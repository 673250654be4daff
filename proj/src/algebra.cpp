#include "g2vertex/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace g2v {

namespace {

Mat7 commutator(const Mat7& a, const Mat7& b) { return a * b - b * a; }

}  // namespace

CartanSet build_cartan() {
  CartanSet c;
  Eigen::Matrix<double, 7, 1> d1, d2;
  d1 << 1, 0, 1, 0, -1, 0, -1;
  d2 << 0, 1, -1, 0, 1, -1, 0;
  c.h_aux1 = d1.asDiagonal();
  c.h_aux2 = d2.asDiagonal();
  c.h1 = c.h_aux1 + c.h_aux2;
  c.h2 = (c.h_aux1 - c.h_aux2) / std::sqrt(3.0);
  return c;
}

std::array<Mat7, 6> build_root_generators() {
  const double s2 = std::sqrt(2.0);
  const double s3 = std::sqrt(3.0);

  Mat7 e1 = Mat7::Zero();
  e1(3, 0) = 2.0;
  e1(4, 1) = -s2;
  e1(5, 2) = -s2;
  e1(6, 3) = 2.0;
  e1 /= s3;

  Mat7 e2 = Mat7::Zero();
  e2(0, 5) = s2;
  e2(1, 6) = s2;

  std::array<Mat7, 6> e;
  e[0] = e1;
  e[1] = e2;
  e[2] = commutator(e1, e2) / s2;
  e[3] = std::sqrt(3.0 / 8.0) * commutator(e1, e[2]);
  e[4] = commutator(e1, e[3]) / s2;
  e[5] = commutator(e2, e[4]) / s2;
  return e;
}

Mat49 two_site_casimir(const CartanSet& cartan, const std::array<Mat7, 6>& roots) {
  Mat49 c = kron(cartan.h1, cartan.h1) + kron(cartan.h2, cartan.h2);
  for (const Mat7& e : roots) {
    const Mat7 et = e.transpose();
    c += kron(e, et) + kron(et, e);
  }
  return c;
}

G2Algebra::G2Algebra() {
  cartan_ = build_cartan();
  roots_ = build_root_generators();
  for (int l = 0; l < 6; ++l) roots_t_[l] = roots_[l].transpose();
  casimir_ = two_site_casimir(cartan_, roots_);

  // Projectors as the cubic polynomials in C.
  const Mat49 id = Mat49::Identity();
  const Mat49& c = casimir_;
  const Mat49 c2 = c * c;
  const Mat49 c3 = c2 * c;
  projectors_[0] = c / 56.0 - c2 / 112.0 - 3.0 / 896.0 * c3;
  projectors_[1] = -c / 8.0 + 5.0 / 64.0 * c2 + 3.0 / 256.0 * c3;
  projectors_[2] = id - 3.0 / 8.0 * c - c2 / 4.0 - 3.0 / 128.0 * c3;
  projectors_[3] = 27.0 / 56.0 * c + 81.0 / 448.0 * c2 + 27.0 / 1792.0 * c3;

  // Casimir spectrum; the four distinct eigenvalues are cached per irrep.
  Eigen::SelfAdjointEigenSolver<Mat49> es(casimir_);
  const auto& ev = es.eigenvalues();
  std::array<double, 4> sums{};
  std::array<int, 4> counts{};
  int block = 0;
  sums[0] = ev(0);
  counts[0] = 1;
  for (int i = 1; i < 49; ++i) {
    if (ev(i) - ev(i - 1) > 1e-6) ++block;
    if (block > 3) throw ProjectorDefect("casimir: more than four distinct eigenvalues");
    sums[block] += ev(i);
    counts[block]++;
  }
  if (block != 3) throw ProjectorDefect("casimir: fewer than four distinct eigenvalues");
  // Identify blocks with irreps through the projector traces: the eigenvalue
  // belonging to P^(d) is the one with tr(P^(d) C) / d.
  for (int k = 0; k < 4; ++k) {
    const double from_trace = (projectors_[k] * casimir_).trace() / irrep_dims[k];
    int best = 0;
    for (int b = 1; b < 4; ++b) {
      if (std::abs(sums[b] / counts[b] - from_trace) <
          std::abs(sums[best] / counts[best] - from_trace))
        best = b;
    }
    if (counts[best] != irrep_dims[k])
      throw ProjectorDefect("casimir: eigenvalue multiplicity does not match irrep dimension");
    casimir_eigs_[k] = sums[best] / counts[best];
  }

  validate();
}

const G2Algebra& G2Algebra::instance() {
  static const G2Algebra alg;
  return alg;
}

Eigen::Vector2d G2Algebra::root_vector(int l) const {
  const Mat7& e = roots_.at(static_cast<size_t>(l));
  const double n2 = (e.transpose() * e).trace();
  Eigen::Vector2d alpha;
  alpha(0) = (e.transpose() * commutator(cartan_.h1, e)).trace() / n2;
  alpha(1) = (e.transpose() * commutator(cartan_.h2, e)).trace() / n2;
  return alpha;
}

const Mat49& G2Algebra::projector(int dim) const {
  for (int k = 0; k < 4; ++k)
    if (irrep_dims[k] == dim) return projectors_[k];
  throw std::out_of_range("projector: irrep dimension must be 1, 7, 14 or 27");
}

double G2Algebra::casimir_eigenvalue(int dim) const {
  for (int k = 0; k < 4; ++k)
    if (irrep_dims[k] == dim) return casimir_eigs_[k];
  throw std::out_of_range("casimir_eigenvalue: irrep dimension must be 1, 7, 14 or 27");
}

std::array<Mat49, 4> G2Algebra::lagrange_projectors() const {
  std::array<Mat49, 4> out;
  for (int k = 0; k < 4; ++k) {
    Mat49 p = Mat49::Identity();
    for (int j = 0; j < 4; ++j) {
      if (j == k) continue;
      p = p * (casimir_ - casimir_eigs_[j] * Mat49::Identity()) /
          (casimir_eigs_[k] - casimir_eigs_[j]);
    }
    out[k] = p;
  }
  return out;
}

void G2Algebra::validate() const {
  const double tol = 1e-10 * kPairDim;
  std::ostringstream msg;
  for (int a = 0; a < 4; ++a) {
    const double tr = projectors_[a].trace();
    if (std::abs(tr - irrep_dims[a]) > tol) {
      msg << "projector trace " << tr << " != " << irrep_dims[a];
      throw ProjectorDefect(msg.str());
    }
    for (int b = 0; b < 4; ++b) {
      const Mat49 prod = projectors_[a] * projectors_[b];
      const Mat49 expect = (a == b) ? projectors_[a] : Mat49::Zero();
      if (max_abs(prod - expect) > tol) {
        msg << "projector orthogonality/idempotency failed for pair (" << irrep_dims[a]
            << ", " << irrep_dims[b] << ")";
        throw ProjectorDefect(msg.str());
      }
    }
  }
  const Mat49 sum = projectors_[0] + projectors_[1] + projectors_[2] + projectors_[3];
  if (max_abs(sum - Mat49::Identity()) > tol)
    throw ProjectorDefect("projector completeness failed");
}

}  // namespace g2v
