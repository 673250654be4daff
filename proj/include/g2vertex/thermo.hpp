#ifndef G2VERTEX_THERMO_HPP
#define G2VERTEX_THERMO_HPP

#include <stdexcept>
#include <utility>
#include <vector>

namespace g2v {

/// Closed-form thermodynamic root densities, level l = 1, 2, 3. Even in xi,
/// positive, with hyperbolic overflow guarded by the asymptotic forms.
double density(int level, double xi);

/// Kernel entry K_{l,j}(xi) of the coupled linear integral equations.
double kernel(int l, int j, double xi);

/// Residual of the density integral equations at rapidity xi for level l,
/// via adaptive quadrature.
double density_equation_residual(int level, double xi, double quad_tol = 1e-11);

/// Max residual over a grid and all three levels.
double verify_density_equations(const std::vector<double>& grid, double quad_tol = 1e-11);

/// Ground-state energy per site in the thermodynamic limit.
/// closed: -pi(9 - 2 sqrt3)/18 - log(2 + sqrt3)/sqrt3 + 17/12.
/// quadrature: the defining integrals evaluated adaptively.
struct EnergyDensity {
  double closed;
  double quadrature;
};
EnergyDensity ground_energy_density();

/// Sound velocities (v1, v2) = (pi, pi/6) extracted from the asymptotic
/// decay of the densities, not hard-coded.
std::pair<double, double> sound_velocities();

/// Finite-size ground-state energy from converged Bethe roots (string-seeded
/// raw solve; the string-form system alone carries O(1/L^2) corrections of
/// the same order as the finite-size terms the sequences measure).
double ground_energy(int chain_length);
/// Finite-size energy of the lowest excitation, same route.
double excitation_energy(int chain_length);

/// C(L) = -(E0(L) - L e_inf) 6 L / pi^2.
std::vector<std::pair<int, double>> central_charge_sequence(const std::vector<int>& sizes);
/// X(L) = (E1(L) - E0(L)) L / (2 pi^2).
std::vector<std::pair<int, double>> dimension_sequence(const std::vector<int>& sizes);

struct IllConditionedFit : std::runtime_error {
  explicit IllConditionedFit(const std::string& what) : std::runtime_error(what) {}
};

struct Extrapolation {
  double limit;
  double uncertainty;
};

/// Sliding-window least squares of value = a + b/L^2 + c/L^4; the limit is a
/// from the largest-L window, the uncertainty the spread of a across windows.
Extrapolation extrapolate(const std::vector<std::pair<int, double>>& sequence);

}  // namespace g2v

#endif
