#ifndef G2VERTEX_ALGEBRA_HPP
#define G2VERTEX_ALGEBRA_HPP

#include <array>
#include <stdexcept>
#include <string>

#include "g2vertex/types.hpp"

namespace g2v {

/// Raised when the projector family fails idempotency, orthogonality,
/// completeness or the trace values beyond tolerance. This signals a
/// transcription error in the generator matrices, not a numerical issue.
struct ProjectorDefect : std::runtime_error {
  explicit ProjectorDefect(const std::string& what) : std::runtime_error(what) {}
};

/// Cartan generators of the seven-dimensional representation.
/// h_aux1/h_aux2 are the independent diagonal operators whose per-site
/// eigenvalues label the conserved charge sectors.
struct CartanSet {
  Mat7 h1, h2;          // H1 = A1 + A2, H2 = (A1 - A2)/sqrt(3)
  Mat7 h_aux1, h_aux2;  // diag{1,0,1,0,-1,0,-1}, diag{0,1,-1,0,1,-1,0}
};

CartanSet build_cartan();

/// The six raising generators; E3..E6 are produced from E1, E2 via the
/// structure-constant commutators.
std::array<Mat7, 6> build_root_generators();

/// Immutable bundle of the G2 data every other module consumes: generators,
/// the two-site quadratic Casimir and the four projectors onto the
/// irreducible blocks of 7 (x) 7 = 1 + 7 + 14 + 27.
///
/// Construction is deterministic and validates the projector family,
/// throwing ProjectorDefect on any failure. All members are safe to share
/// across threads once built.
class G2Algebra {
 public:
  G2Algebra();

  static const G2Algebra& instance();

  const CartanSet& cartan() const { return cartan_; }
  const std::array<Mat7, 6>& roots() const { return roots_; }
  const std::array<Mat7, 6>& roots_transposed() const { return roots_t_; }

  /// Root vector of E_l with respect to (H1, H2): [H_i, E_l] = alpha_i E_l.
  Eigen::Vector2d root_vector(int l) const;

  const Mat49& casimir() const { return casimir_; }

  /// Projector onto the irrep of the given dimension (1, 7, 14 or 27).
  const Mat49& projector(int dim) const;
  const std::array<Mat49, 4>& projectors() const { return projectors_; }

  /// Casimir eigenvalue on the irrep of the given dimension. These are
  /// computed numerically at construction, never hard-coded.
  double casimir_eigenvalue(int dim) const;

  /// Projectors rebuilt by Lagrange interpolation on the numerically found
  /// Casimir eigenvalues; used to cross-check the polynomial formulas.
  std::array<Mat49, 4> lagrange_projectors() const;

  static constexpr std::array<int, 4> irrep_dims{1, 7, 14, 27};

 private:
  void validate() const;

  CartanSet cartan_;
  std::array<Mat7, 6> roots_;
  std::array<Mat7, 6> roots_t_;
  Mat49 casimir_;
  std::array<Mat49, 4> projectors_;  // ordered as irrep_dims
  std::array<double, 4> casimir_eigs_{};
};

/// Two-site Casimir built from a generator set:
/// C = H1 (x) H1 + H2 (x) H2 + sum_l (E_l (x) E_l^T + E_l^T (x) E_l).
Mat49 two_site_casimir(const CartanSet& cartan, const std::array<Mat7, 6>& roots);

}  // namespace g2v

#endif
