#include "g2vertex/exact_diag.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

namespace g2v {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sector_seed(std::uint64_t base, int chain_length, SectorLabel s) {
  std::uint64_t h = splitmix64(base ^ (0x100000001b3ULL * static_cast<std::uint64_t>(chain_length)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(s.m1 + 64));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(s.m2 + 64) << 8));
  return h;
}

Eigen::VectorXd random_unit(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
  v.normalize();
  return v;
}

int spin3(SectorLabel s) { return 3 * s.m1 + 2 * s.m2; }

// canonical member of a mirror pair: positive azimuthal spin, ties broken
// lexicographically
bool is_canonical(SectorLabel s) {
  const int sz = spin3(s);
  if (sz != 0) return sz > 0;
  return s.m1 > 0 || (s.m1 == 0 && s.m2 >= 0);
}

struct TrlResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  int matvecs = 0;
  bool converged = false;
};

// Thick-restart Lanczos for the smallest eigenpair of a symmetric operator,
// deflated against an orthonormal set of locked vectors. The projected
// matrix is recorded from measured inner products, with two-pass
// reorthogonalization against the active basis.
TrlResult trl_lowest(const std::function<void(const double*, double*)>& apply,
                     Eigen::Index dim, const Eigen::MatrixXd& locked, double residual_tol,
                     double value_stall_tol, int max_basis, int max_restarts,
                     std::mt19937_64& rng) {
  const Eigen::Index room = dim - locked.cols();
  const int m = static_cast<int>(std::min<Eigen::Index>(max_basis, room));
  TrlResult out;
  if (m < 1) return out;

  Eigen::MatrixXd basis(dim, m + 1);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd w(dim);

  auto deflate = [&](Eigen::VectorXd& x) {
    if (locked.cols() > 0) x.noalias() -= locked * (locked.transpose() * x);
  };

  Eigen::VectorXd v0 = random_unit(dim, rng);
  deflate(v0);
  double n0 = v0.norm();
  while (n0 < 1e-8) {
    v0 = random_unit(dim, rng);
    deflate(v0);
    n0 = v0.norm();
  }
  basis.col(0) = v0 / n0;

  int nbasis = 1;
  double prev_theta = std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < max_restarts; ++restart) {
    for (int j = nbasis - 1; j < m; ++j) {
      apply(basis.col(j).data(), w.data());
      ++out.matvecs;
      deflate(w);
      Eigen::VectorXd h = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h2;
      h += h2;
      for (int i = 0; i <= j; ++i) {
        proj(i, j) = h(i);
        proj(j, i) = h(i);
      }
      double beta = w.norm();
      if (beta < 1e-12) {
        // invariant subspace reached; refresh with a random direction
        w = random_unit(dim, rng);
        deflate(w);
        w.noalias() -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        beta = w.norm();
        if (beta < 1e-12) {
          nbasis = j + 1;
          break;
        }
        proj(j + 1, j) = 0.0;
        proj(j, j + 1) = 0.0;
        basis.col(j + 1) = w / beta;
        nbasis = j + 2;
        continue;
      }
      proj(j + 1, j) = beta;
      proj(j, j + 1) = beta;
      basis.col(j + 1) = w / beta;
      nbasis = j + 2;
    }

    const int nb = std::min(nbasis, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(proj.topLeftCorner(nb, nb));
    const Eigen::VectorXd& theta = small.eigenvalues();
    const Eigen::MatrixXd& y = small.eigenvectors();
    const double beta_m = (nbasis > nb) ? proj(nb, nb - 1) : 0.0;
    const double est = std::abs(beta_m * y(nb - 1, 0));
    best_residual = std::min(best_residual, est);
    const double scale = std::max(1.0, std::abs(theta(0)));

    const bool stalled = std::abs(theta(0) - prev_theta) < value_stall_tol * scale;
    prev_theta = theta(0);

    if (est < residual_tol * scale || stalled || nbasis <= nb) {
      Eigen::VectorXd u = basis.leftCols(nb) * y.col(0);
      deflate(u);
      u.normalize();
      apply(u.data(), w.data());
      ++out.matvecs;
      const double rq = u.dot(w);
      const double true_res = (w - rq * u).norm();
      best_residual = std::min(best_residual, true_res);
      if (true_res < residual_tol * std::max(1.0, std::abs(rq)) ||
          (stalled && true_res < std::sqrt(value_stall_tol) * scale) || nbasis <= nb) {
        out.value = rq;
        out.vector = std::move(u);
        out.residual = true_res;
        out.converged = true;
        return out;
      }
    }

    // thick restart: keep the lowest Ritz vectors plus the trailing Lanczos
    // vector that carries the residual coupling
    const int keep = std::min(12, nb - 2);
    if (keep < 1) break;
    const Eigen::MatrixXd kept = basis.leftCols(nb) * y.leftCols(keep);
    basis.leftCols(keep) = kept;
    basis.col(keep) = basis.col(nb);
    proj.setZero();
    for (int i = 0; i < keep; ++i) {
      proj(i, i) = theta(i);
      proj(keep, i) = beta_m * y(nb - 1, i);
      proj(i, keep) = proj(keep, i);
    }
    nbasis = keep + 1;
  }

  out.converged = false;
  out.residual = best_residual;
  return out;
}

}  // namespace

struct SectorCache {
  std::shared_ptr<SectorSpace> space;
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  bool complete = false;  // dense path resolved the whole block
};

SectorCache& EdEngine::cache_entry(int chain_length, SectorLabel sector) {
  const auto key = std::make_pair(chain_length, sector);
  auto it = sector_cache_.find(key);
  if (it == sector_cache_.end())
    it = sector_cache_.emplace(key, std::make_shared<SectorCache>()).first;
  if (!it->second->space)
    it->second->space = std::make_shared<SectorSpace>(chain_length, sector);
  return *it->second;
}

EdEngine::EdEngine(EdOptions options) : options_(options) {}

EdEngine::~EdEngine() = default;

EdEngine::SectorEigs EdEngine::dense_eigs(const SectorSpace& space, int nev) const {
  const Eigen::MatrixXd h = space.dense_hamiltonian();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const int n = static_cast<int>(std::min<Eigen::Index>(nev, h.rows()));
  SectorEigs out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  out.vectors = es.eigenvectors().leftCols(n);
  return out;
}

EdEngine::SectorEigs EdEngine::lowest_eigenpairs(int chain_length, SectorLabel sector, int nev,
                                                 double tol, std::optional<double> stop_above) {
  SectorCache& cache = cache_entry(chain_length, sector);
  const Eigen::Index dim = cache.space->dim();
  const int want = static_cast<int>(std::min<Eigen::Index>(nev, dim));

  if (dim <= options_.dense_threshold) {
    if (!cache.complete) {
      SectorEigs all = dense_eigs(*cache.space, static_cast<int>(dim));
      cache.values = std::move(all.values);
      cache.vectors = std::move(all.vectors);
      cache.complete = true;
    }
  } else {
    auto apply = [sp = cache.space.get()](const double* x, double* y) {
      sp->apply_hamiltonian(x, y);
    };
    if (cache.vectors.rows() != dim) cache.vectors.resize(dim, 0);
    while (static_cast<int>(cache.values.size()) < want) {
      if (stop_above && !cache.values.empty() && cache.values.back() > *stop_above) break;
      std::mt19937_64 rng(sector_seed(options_.seed + 977 * (cache.values.size() + 1),
                                      chain_length, sector));
      TrlResult r = trl_lowest(apply, dim, cache.vectors, tol, 1e-13, options_.max_basis,
                               options_.max_restarts, rng);
      if (!r.converged) {
        std::ostringstream msg;
        msg << "Lanczos stalled in sector (" << sector.m1 << ", " << sector.m2
            << "), L=" << chain_length << ", pair " << cache.values.size()
            << ", best residual " << r.residual << " after " << r.matvecs << " matvecs";
        throw ConvergenceFailure(msg.str(), r.matvecs, r.residual);
      }
      cache.vectors.conservativeResize(Eigen::NoChange, cache.vectors.cols() + 1);
      cache.vectors.col(cache.vectors.cols() - 1) = r.vector;
      cache.values.push_back(r.value);
    }
    // deflation can deliver values slightly out of order; sort pairs
    std::vector<int> order(cache.values.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return cache.values[static_cast<size_t>(a)] < cache.values[static_cast<size_t>(b)]; });
    std::vector<double> sorted_vals(cache.values.size());
    Eigen::MatrixXd sorted_vecs(dim, cache.vectors.cols());
    for (size_t i = 0; i < order.size(); ++i) {
      sorted_vals[i] = cache.values[static_cast<size_t>(order[i])];
      sorted_vecs.col(static_cast<Eigen::Index>(i)) = cache.vectors.col(order[i]);
    }
    cache.values = std::move(sorted_vals);
    cache.vectors = std::move(sorted_vecs);
  }

  SectorEigs out;
  const int have = static_cast<int>(std::min<size_t>(cache.values.size(),
                                                     static_cast<size_t>(want)));
  out.values.assign(cache.values.begin(), cache.values.begin() + have);
  out.vectors = cache.vectors.leftCols(have);
  if (stop_above) {
    int keep = 0;
    while (keep < have && (keep == 0 || out.values[static_cast<size_t>(keep) - 1] <= *stop_above))
      ++keep;
    out.values.resize(static_cast<size_t>(keep));
    out.vectors = out.vectors.leftCols(keep).eval();
  }
  return out;
}

std::vector<int> cluster_momenta(const SectorSpace& space, const Eigen::MatrixXd& vectors,
                                 double tol) {
  const Eigen::Index c = vectors.cols();
  Eigen::MatrixXd tv(vectors.rows(), c);
  Eigen::VectorXd y(vectors.rows());
  for (Eigen::Index j = 0; j < c; ++j) {
    space.apply_translation(vectors.col(j).data(), y.data());
    tv.col(j) = y;
  }
  const Eigen::MatrixXd u = vectors.transpose() * tv;
  Eigen::EigenSolver<Eigen::MatrixXd> es(u);
  std::vector<int> momenta;
  const int len = space.chain_length();
  for (Eigen::Index i = 0; i < c; ++i) {
    const Complex z = es.eigenvalues()(i);
    if (std::abs(std::abs(z) - 1.0) > std::max(tol, 1e-6)) {
      std::ostringstream msg;
      msg << "translation eigenvalue off the unit circle: |z| = " << std::abs(z);
      throw std::runtime_error(msg.str());
    }
    const double phase = std::arg(z) * len / (2.0 * M_PI);
    int k = static_cast<int>(std::lround(phase)) % len;
    if (k < 0) k += len;
    momenta.push_back(k);
  }
  std::sort(momenta.begin(), momenta.end());
  return momenta;
}

SpectrumSlice EdEngine::sector_spectrum(int chain_length, SectorLabel sector, int nev) {
  SectorEigs eigs = lowest_eigenpairs(chain_length, sector, nev, options_.residual_tol,
                                      std::nullopt);
  const SectorSpace& space = *cache_entry(chain_length, sector).space;

  SpectrumSlice slice;
  slice.sector = sector;
  slice.energies = eigs.values;

  const bool complete = eigs.values.size() < static_cast<size_t>(nev) ||
                        static_cast<std::int64_t>(eigs.values.size()) == space.dim();
  size_t i = 0;
  while (i < eigs.values.size()) {
    size_t j = i + 1;
    while (j < eigs.values.size() &&
           eigs.values[j] - eigs.values[j - 1] < options_.degeneracy_tol)
      ++j;
    slice.level_energies.push_back(eigs.values[i]);
    slice.degeneracies.push_back(static_cast<int>(j - i));
    if (j == eigs.values.size() && !complete) {
      // the trailing cluster may extend beyond the computed pairs; its span
      // is then not translation invariant, so the labels stay undetermined
      for (size_t k = i; k < j; ++k) slice.momenta.push_back(-1);
    } else {
      const Eigen::MatrixXd cluster = eigs.vectors.middleCols(static_cast<Eigen::Index>(i),
                                                              static_cast<Eigen::Index>(j - i));
      for (int k : cluster_momenta(space, cluster)) slice.momenta.push_back(k);
    }
    i = j;
  }
  return slice;
}

const std::map<SectorLabel, double>& EdEngine::sector_minima(int chain_length) {
  auto it = minima_cache_.find(chain_length);
  if (it != minima_cache_.end()) return it->second;

  std::map<SectorLabel, double> minima;
  const auto dims = sector_dimensions(chain_length);
  for (const auto& [sector, dim] : dims) {
    if (dim == 0) continue;
    if (!is_canonical(sector)) continue;
    const SectorSpace space(chain_length, sector);
    if (dim <= options_.dense_threshold) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(space.dense_hamiltonian());
      minima[sector] = es.eigenvalues()(0);
    } else {
      auto apply = [&space](const double* x, double* y) { space.apply_hamiltonian(x, y); };
      std::mt19937_64 rng(sector_seed(options_.seed, chain_length, sector));
      Eigen::MatrixXd locked(space.dim(), 0);
      TrlResult r = trl_lowest(apply, space.dim(), locked, 1e-6, 1e-12, options_.max_basis,
                               options_.max_restarts, rng);
      if (!r.converged)
        throw ConvergenceFailure("sector-minimum scan stalled", r.matvecs, r.residual);
      minima[sector] = r.value;
    }
  }
  // spin-reversal symmetry fills the mirrored half
  for (const auto& [sector, dim] : dims) {
    if (dim == 0 || is_canonical(sector)) continue;
    minima[sector] = minima.at({-sector.m1, -sector.m2});
  }
  return minima_cache_.emplace(chain_length, std::move(minima)).first->second;
}

GroundStateInfo EdEngine::ground_state(int chain_length) {
  const auto& minima = sector_minima(chain_length);
  const SpectrumSlice zero = sector_spectrum(chain_length, {0, 0}, 2);
  const double e0 = zero.energies.at(0);

  for (const auto& [sector, value] : minima) {
    if (sector == SectorLabel{0, 0}) continue;
    if (value <= e0 + options_.degeneracy_tol) {
      std::ostringstream msg;
      msg << "ground state not confined to sector (0,0): sector (" << sector.m1 << ", "
          << sector.m2 << ") reaches " << value;
      throw std::runtime_error(msg.str());
    }
  }
  if (zero.energies.size() > 1 && zero.energies[1] - e0 < options_.degeneracy_tol)
    throw std::runtime_error("ground state is degenerate");
  if (zero.momenta.at(0) != 0) throw std::runtime_error("ground state carries momentum");
  return {e0, {0, 0}, 0};
}

ExcitationInfo EdEngine::lowest_excitation(int chain_length) {
  const auto& minima = sector_minima(chain_length);
  const GroundStateInfo gs = ground_state(chain_length);
  const double e0 = gs.energy;
  const double tol = options_.degeneracy_tol;
  const auto dims = sector_dimensions(chain_length);

  // candidate level: the other sectors' minima and the second distinct level
  // of the (0,0) block
  double e1 = std::numeric_limits<double>::infinity();
  for (const auto& [sector, value] : minima)
    if (!(sector == SectorLabel{0, 0}) && value < e1) e1 = value;
  {
    const std::int64_t dim00 = dims.at({0, 0});
    int nev = 3;
    for (;;) {
      const SectorEigs eigs =
          lowest_eigenpairs(chain_length, {0, 0}, nev, options_.residual_tol, e1 + 10 * tol);
      bool found = false;
      for (double v : eigs.values)
        if (v > e0 + tol) {
          e1 = std::min(e1, v);
          found = true;
          break;
        }
      const bool exhausted = eigs.values.size() < static_cast<size_t>(nev) ||
                             static_cast<std::int64_t>(nev) >= dim00;
      if (found || exhausted) break;
      nev += 4;
    }
  }
  if (!std::isfinite(e1)) throw std::runtime_error("no excitation found");

  // multiplicity across all sectors whose minimum reaches the level;
  // mirrored sectors counted via the spin-reversal degeneracy
  int total = 0;
  ExcitationInfo info{};
  info.ground_energy = e0;
  info.energy = e1;
  info.gap = e1 - e0;
  info.representative = {0, 0};
  info.momentum = 0;
  bool have_rep = false;

  std::map<SectorLabel, int> counted;
  for (const auto& [sector, value] : minima) {
    if (value > e1 + 10 * tol) continue;
    if (!is_canonical(sector)) continue;
    const std::int64_t dim = dims.at(sector);
    int nev = 4;
    int mult = 0;
    SectorEigs eigs;
    for (;;) {
      eigs = lowest_eigenpairs(chain_length, sector, nev, options_.residual_tol, e1 + 10 * tol);
      mult = 0;
      for (double v : eigs.values) {
        if (v > e0 + tol && v < e1 - tol) {
          std::ostringstream msg;
          msg << "level " << v << " below the assumed first excitation " << e1;
          throw std::runtime_error(msg.str());
        }
        if (std::abs(v - e1) <= tol) ++mult;
      }
      const bool exhausted = eigs.values.size() < static_cast<size_t>(nev) ||
                             eigs.values.back() > e1 + tol ||
                             static_cast<std::int64_t>(nev) >= dim;
      if (exhausted) break;
      nev += 4;
    }
    counted[sector] = mult;
    total += mult;
    SectorCache& cache = cache_entry(chain_length, sector);
    if (mult > 0 && (!have_rep || (sector == SectorLabel{1, 1}))) {
      have_rep = true;
      info.representative = sector;
      std::vector<Eigen::Index> cols;
      for (size_t i = 0; i < eigs.values.size(); ++i)
        if (std::abs(eigs.values[i] - e1) <= tol) cols.push_back(static_cast<Eigen::Index>(i));
      Eigen::MatrixXd cluster(cache.space->dim(), static_cast<Eigen::Index>(cols.size()));
      for (size_t i = 0; i < cols.size(); ++i)
        cluster.col(static_cast<Eigen::Index>(i)) = eigs.vectors.col(cols[i]);
      info.momentum = cluster_momenta(*cache.space, cluster).front();
    }
    // bound the working set: drop the compiled bond action of side sectors
    if (!(sector == SectorLabel{0, 0})) cache.space.reset();
  }
  // add mirror counts for non-self-mirror sectors
  for (const auto& [sector, mult] : counted) {
    const SectorLabel mirror{-sector.m1, -sector.m2};
    if (!(mirror == sector)) total += mult;
  }
  info.degeneracy = total;
  return info;
}

namespace {
EdEngine& default_engine() {
  static EdEngine engine;
  return engine;
}
}  // namespace

SpectrumSlice sector_spectrum(int chain_length, SectorLabel sector, int nev) {
  return default_engine().sector_spectrum(chain_length, sector, nev);
}
GroundStateInfo ground_state(int chain_length) {
  return default_engine().ground_state(chain_length);
}
ExcitationInfo lowest_excitation(int chain_length) {
  return default_engine().lowest_excitation(chain_length);
}

}  // namespace g2v
