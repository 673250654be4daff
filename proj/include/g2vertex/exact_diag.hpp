#ifndef G2VERTEX_EXACT_DIAG_HPP
#define G2VERTEX_EXACT_DIAG_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "g2vertex/chain.hpp"

namespace g2v {

struct EdOptions {
  double residual_tol = 1e-9;    // per-eigenpair residual target
  double degeneracy_tol = 1e-8;  // energy-equality tolerance for clustering
  int max_basis = 72;            // thick-restart window
  int max_restarts = 400;
  int dense_threshold = 560;     // sector dims at or below this go dense
  std::uint64_t seed = 20230217;
};

struct ConvergenceFailure : std::runtime_error {
  ConvergenceFailure(const std::string& what, int iterations_, double best_residual_)
      : std::runtime_error(what), iterations(iterations_), best_residual(best_residual_) {}
  int iterations;
  double best_residual;
};

struct SpectrumSlice {
  SectorLabel sector;
  std::vector<double> energies;     // ascending, one entry per eigenpair
  std::vector<int> degeneracies;    // per distinct level among the computed pairs
  std::vector<int> momenta;         // translation labels in units of 2*pi/L
  std::vector<double> level_energies;  // distinct levels matching degeneracies
};

struct GroundStateInfo {
  double energy;
  SectorLabel sector;
  int momentum;
};

struct ExcitationInfo {
  double gap;
  double ground_energy;
  double energy;
  SectorLabel representative;  // a sector holding the excitation
  int degeneracy;              // counted across all sectors
  int momentum;                // label of the representative cluster
};

struct SectorCache;

/// Iterative/dense eigensolver over charge sectors with per-L caches of the
/// sector-minimum scan and of converged eigenpairs. Single-threaded; results
/// are deterministic for a fixed seed.
class EdEngine {
 public:
  explicit EdEngine(EdOptions options = {});
  ~EdEngine();

  SpectrumSlice sector_spectrum(int chain_length, SectorLabel sector, int nev);
  GroundStateInfo ground_state(int chain_length);
  ExcitationInfo lowest_excitation(int chain_length);

  /// Loose lower bound scan: minimum energy of every valid sector.
  const std::map<SectorLabel, double>& sector_minima(int chain_length);

  const EdOptions& options() const { return options_; }

 private:
  struct SectorEigs {
    std::vector<double> values;
    Eigen::MatrixXd vectors;
  };

  SectorCache& cache_entry(int chain_length, SectorLabel sector);
  SectorEigs lowest_eigenpairs(int chain_length, SectorLabel sector, int nev, double tol,
                               std::optional<double> stop_above);
  SectorEigs dense_eigs(const SectorSpace& space, int nev) const;

  EdOptions options_;
  std::map<int, std::map<SectorLabel, double>> minima_cache_;
  std::map<std::pair<int, SectorLabel>, std::shared_ptr<SectorCache>> sector_cache_;
};

/// Convenience wrappers over a process-wide engine with default options.
SpectrumSlice sector_spectrum(int chain_length, SectorLabel sector, int nev);
GroundStateInfo ground_state(int chain_length);
ExcitationInfo lowest_excitation(int chain_length);

/// Momentum labels of an orthonormal energy cluster: eigenvalues of the
/// translation operator projected on the cluster, as integers mod L.
std::vector<int> cluster_momenta(const SectorSpace& space, const Eigen::MatrixXd& vectors,
                                 double tol = 1e-8);

}  // namespace g2v

#endif
