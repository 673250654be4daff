#ifndef G2VERTEX_FREE_ENERGY_HPP
#define G2VERTEX_FREE_ENERGY_HPP

#include <stdexcept>
#include <string>

#include "g2vertex/bethe.hpp"

namespace g2v {

/// Spectral regimes of the bounded partition function per site:
/// I = [-3/2, 1/2], II = [-9/2, -3/2], III = [-13/2, -9/2].
enum class Regime { I, II, III };

struct RegimeInterval {
  double lo, hi;
};

RegimeInterval regime_interval(Regime r);
Regime regime_of(double lambda);

struct GammaPole : std::runtime_error {
  explicit GammaPole(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Closed-form partition function per site in one regime: gamma-function
/// products with trigonometric prefactors. Arguments are pushed through
/// log-gamma with the reflection identity; removable singularities inside
/// the regimes are evaluated by paired one-sided offsets.
double kappa_closed(Regime r, double lambda);

/// Piecewise closed form over the whole bounded interval.
double kappa_infinity(double lambda);

/// Bulk free energy from the integral representations (regimes I and II).
/// Requires the integrands to decay: lambda in (-1, 1/2] for I and
/// (-4, -3/2) for II; outside throws QuadratureFailure.
double f_integral(Regime r, double lambda);

/// I(a,b,n,m) = int_0^inf (e^{-ax} - e^{-bx}) / (x (cosh x - cos(m pi/n))) dx
/// for odd m with 0 < m < 2n, as the closed gamma-function sum.
double appendix_integral(double a, double b, int n, int m);
/// The same integral by adaptive quadrature (the oracle).
double appendix_integral_quadrature(double a, double b, int n, int m, double tol = 1e-12);

/// Residuals of the two hyperbolic partial-fraction identities.
double trig_identity_residual_main(double x);     // cosh x / (cosh(x/2) cosh(3x))
double trig_identity_residual_second(double x);   // cosh x / cosh(3x)

struct CornerReport {
  double boundary;
  double gap;          // |kappa_left - kappa_right| continued to the boundary
  double slope_left;   // one-sided derivatives of the adjoining closed forms
  double slope_right;
};

CornerReport corner_analysis(double boundary, double step);

/// Partition function per site at finite L from the eigenvalue sum over the
/// supplied ground-state roots.
double kappa_finite(const BetheState& roots, int chain_length, double lambda);
/// Convenience overload solving (and caching) the ground-state roots.
double kappa_finite(int chain_length, double lambda);

}  // namespace g2v

#endif
