#ifndef G2VERTEX_BETHE_HPP
#define G2VERTEX_BETHE_HPP

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "g2vertex/chain.hpp"

namespace g2v {

struct NewtonDivergence : std::runtime_error {
  NewtonDivergence(const std::string& what, std::vector<Complex> last_iterate_)
      : std::runtime_error(what), last_iterate(std::move(last_iterate_)) {}
  std::vector<Complex> last_iterate;
};

struct RootCollision : std::runtime_error {
  explicit RootCollision(const std::string& what) : std::runtime_error(what) {}
};

struct PoleProximity : std::runtime_error {
  explicit PoleProximity(const std::string& what) : std::runtime_error(what) {}
};

/// Solution of the raw nested equations: complex root multisets for the two
/// levels plus the converged log-form residual.
struct BetheState {
  std::vector<Complex> roots1;
  std::vector<Complex> roots2;
  double residual = 0.0;
};

/// Solution of the logarithmic string-form system: real rapidities of the
/// level-1 one-strings (xi1), level-2 reals (xi2) and three-string centers
/// (xi3), together with their quantum numbers.
struct StringState {
  std::vector<double> xi1, xi2, xi3;
  std::vector<double> q1, q2, q3;
  double residual = 0.0;
};

/// Quantum-number sequences indexing a string-form state.
struct QuantumNumbers {
  std::vector<double> q1, q2, q3;
};

/// phi_s(x) = 2 arctan(x/s).
double phi(double s, double x);
/// psi_s(x) = 2 s / (s^2 + x^2) = phi_s'(x).
double psi(double s, double x);

/// Ground-state configuration: Q_j^(1,3) = (L/2-1)/2 - (j-1) over L/2 values,
/// Q_j^(2) = (L-1)/2 - (j-1) over L values. Requires even L.
QuantumNumbers ground_quantum_numbers(int chain_length);

struct StringSolveOptions {
  double tol = 1e-13;        // residual target (max-norm)
  int max_iterations = 200;
  int max_halvings = 20;
};

StringState solve_string_system(int chain_length, const QuantumNumbers& q,
                                const StringSolveOptions& options = {});

/// Raw complex roots rebuilt from a string solution; `deviation` perturbs the
/// three-string imaginary parts to +-(1+deviation) so the Newton iteration on
/// the raw system does not start on the singular string manifold.
BetheState reconstruct_from_strings(const StringState& s, double deviation);

struct RawSolveOptions {
  double tol = 1e-11;
  int max_iterations = 250;
  int max_halvings = 20;
  double collision_threshold = 1e-8;
};

/// Damped Newton on the logarithmic form of the raw nested equations with
/// branch integers frozen from the seed.
BetheState solve_raw_bethe(int chain_length, const RootCount& counts, const BetheState& seed,
                           const RawSolveOptions& options = {});

/// Max-norm of the raw nested equations in logarithmic form at the given
/// roots, folded to the nearest branch. Zero for an exact Bethe state.
double raw_log_residual(const BetheState& state, int chain_length);

/// E(L) = -sum_j 1/((lambda_j^(1))^2 + 1/4) + 17 L / 12. Real part; the
/// imaginary part vanishes for self-conjugate states.
double energy_from_roots(const BetheState& state, int chain_length);

/// Energy of a string-form state through the collapsed pair formula
/// (equivalent to reconstructing the strings exactly and summing).
double string_state_energy(const StringState& s, int chain_length);

/// Transfer-matrix eigenvalue at spectral point lambda from the dressing
/// sum. Throws PoleProximity when a dressing denominator falls below 1e-12.
Complex eigenvalue_from_roots(Complex lambda, const BetheState& state, int chain_length);

/// log |Lambda(lambda)| evaluated stably (terms combined by their exponents);
/// used by the partition-function-per-site evaluators.
double log_abs_eigenvalue(Complex lambda, const BetheState& state, int chain_length);

/// Convenience: string solve -> reconstruct -> raw solve for the ground
/// state of an even chain, retrying over a ladder of deviation seeds.
BetheState ground_state_roots(int chain_length);
BetheState solve_ground_from_strings(int chain_length, const StringState& s);

/// Raw roots of the lowest excitation (charge sector (1,1)): hole surgery on
/// the ground configuration, removing the most negative three-string and the
/// two most negative level-2 roots, then relaxing. The mirrored surgery
/// yields the opposite-momentum partner. Requires L = 8, 12, 16, ...
BetheState excited_state_roots(int chain_length);

/// Level-1 roots sorted into near-real one-strings and three-string
/// triplets (center, top, bottom); diagnostic for root-pattern figures.
struct StringPattern {
  std::vector<double> reals;
  std::vector<std::array<Complex, 3>> triplets;
  bool clean = true;  // every root classified
};
StringPattern classify_level1(const BetheState& state, double real_tol = 0.2);

}  // namespace g2v

#endif
