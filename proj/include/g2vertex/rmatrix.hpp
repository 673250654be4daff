#ifndef G2VERTEX_RMATRIX_HPP
#define G2VERTEX_RMATRIX_HPP

#include <array>

#include "g2vertex/algebra.hpp"
#include "g2vertex/types.hpp"

namespace g2v {

/// R(lambda) for the vertex model, normalized so every entry is a polynomial
/// of degree <= 3 in the spectral parameter:
///
///   R(lambda) = rho0 * ( P27 + f14 P14 + f7 P7 + f0 P0 ),
///   rho0      = (1+lambda)(4+lambda)(6+lambda),
///
/// with pole-canceling rational factors f_k. The cubic coefficient tensors
/// are cached at construction; transfer-matrix loops use those instead of
/// re-assembling the projector combination.
class RMatrix {
 public:
  explicit RMatrix(const G2Algebra& algebra = G2Algebra::instance());

  Mat49 operator()(double lambda) const;
  Mat49c operator()(Complex lambda) const;

  /// Coefficient of lambda^k, k = 0..3.
  const Mat49& coefficient(int k) const { return coeff_.at(static_cast<size_t>(k)); }

  static double rho0(double lambda) { return (1 + lambda) * (4 + lambda) * (6 + lambda); }
  static Complex rho0(Complex lambda) {
    return (1.0 + lambda) * (4.0 + lambda) * (6.0 + lambda);
  }

  /// R built directly from the projector decomposition (the un-cached route,
  /// kept as the second construction path for cross-checks).
  Mat49 from_projectors(double lambda) const;

  const G2Algebra& algebra() const { return *algebra_; }

 private:
  const G2Algebra* algebra_;
  std::array<Mat49, 4> coeff_;
};

/// Anti-diagonal crossing matrix, V[i][7-1-i] = (-1)^i (0-based).
Mat7 crossing_matrix();

/// Max-norm of R12 R13 R23 - R23 R13 R12 on the triple product, scaled by
/// the product of the three operand max-norms.
double yang_baxter_residual(const RMatrix& r, Complex lambda1, Complex lambda2);

struct ScatteringReport {
  double unitarity;  // R12(l) R21(-l) - rho0(l) rho0(-l) Id
  double parity;     // P R12(l) P - R12(l)
  double temporal;   // R12(l)^{t1 t2} - R12(l)
  double crossing;   // R12(l) + V1 R12(-6-l)^{t2} V1^{-1}
  double max() const;
};

ScatteringReport verify_scattering_properties(const RMatrix& r, double lambda);

/// Largest commutator norm of [R(lambda), g (x) Id + Id (x) g] over all 14
/// generators, scaled by the operand norms.
double invariance_residual(const RMatrix& r, double lambda);

}  // namespace g2v

#endif
