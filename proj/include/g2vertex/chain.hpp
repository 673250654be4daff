#ifndef G2VERTEX_CHAIN_HPP
#define G2VERTEX_CHAIN_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "g2vertex/algebra.hpp"
#include "g2vertex/types.hpp"

namespace g2v {

/// Pair of U(1) charges (eigenvalues of the summed auxiliary Cartan
/// operators) labeling a Hilbert-space block.
struct SectorLabel {
  int m1 = 0;
  int m2 = 0;
  friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
  friend auto operator<=>(const SectorLabel&, const SectorLabel&) = default;
};

struct RootCount {
  int n1 = 0;
  int n2 = 0;
};

struct EmptySector : std::runtime_error {
  explicit EmptySector(const std::string& what) : std::runtime_error(what) {}
};

struct NegativeCount : std::runtime_error {
  explicit NegativeCount(const std::string& what) : std::runtime_error(what) {}
};

/// Per-site charge weights of the 7 basis states under the two auxiliary
/// Cartan operators.
inline constexpr int kWeight1[7] = {1, 0, 1, 0, -1, 0, -1};
inline constexpr int kWeight2[7] = {0, 1, -1, 0, 1, -1, 0};

/// Local Hamiltonian density, the cubic polynomial in the two-site Casimir.
const Mat49& local_hamiltonian_density();

/// Charge-sector constraints: for 0 <= m1 <= L, -L <= m2 <= L - m1;
/// for -L <= m1 <= 0, -m1 - L <= m2 <= L.
bool sector_valid(int chain_length, SectorLabel sector);

/// All valid sector labels (row-major in m1, then m2).
std::vector<SectorLabel> all_sectors(int chain_length);

/// Dimensions of every sector, computed by convolving the per-site weight
/// distribution (no basis enumeration). Keys are valid sectors only.
std::map<SectorLabel, std::int64_t> sector_dimensions(int chain_length);

/// Product states whose per-site weights sum to the sector label, as packed
/// base-7 keys, sorted ascending. Site 1 is the slowest (most significant)
/// digit. Empty result is valid; callers that need a nonempty block use
/// SectorSpace which throws EmptySector.
std::vector<std::uint32_t> sector_basis(int chain_length, SectorLabel sector);

/// Number of Bethe roots per nesting level for a positive-azimuthal sector:
/// N1 = 2L - 2 m1 - m2, N2 = L - m1 - m2. Throws NegativeCount outside the
/// parametrization's range.
RootCount root_counts(int chain_length, SectorLabel sector);

/// Matrix-free chain operators restricted to one charge sector. Shared
/// lookup tables are read-only after construction.
class SectorSpace {
 public:
  SectorSpace(int chain_length, SectorLabel sector);

  int chain_length() const { return length_; }
  SectorLabel sector() const { return sector_; }
  std::int64_t dim() const { return static_cast<std::int64_t>(keys_.size()); }
  const std::vector<std::uint32_t>& keys() const { return keys_; }

  /// y = H x, the periodic sum of the local density over bonds (wrap bond
  /// included). Deterministic summation order.
  void apply_hamiltonian(const double* x, double* y) const;

  /// y = T x with T the one-site translation.
  void apply_translation(const double* x, double* y) const;

  /// Dense H restricted to this sector (small blocks and L <= 4 oracles).
  Eigen::MatrixXd dense_hamiltonian() const;
  Eigen::MatrixXd dense_translation() const;

  std::int64_t index_of(std::uint32_t key) const;  // -1 when absent

 private:
  void build_action() const;

  int length_;
  SectorLabel sector_;
  std::vector<std::uint32_t> keys_;
  std::vector<std::uint8_t> digits_;  // dim x L, site-major
  std::vector<std::uint32_t> powers_;
  // bond action compiled to a sparse gather list on first use; the chain
  // Hamiltonian itself is never stored densely
  mutable std::vector<std::int64_t> row_start_;
  mutable std::vector<std::int32_t> col_index_;
  mutable std::vector<double> weight_;
};

/// Dense operators on the full 7^L space; only sensible for L <= 4.
Eigen::MatrixXd dense_hamiltonian(int chain_length);
Eigen::MatrixXd dense_translation(int chain_length);
Eigen::VectorXd charge_diagonal(int chain_length, int which);  // which = 1, 2
Eigen::VectorXd spin3_diagonal(int chain_length);              // Sz = 3 Q1 + 2 Q2

}  // namespace g2v

#endif
