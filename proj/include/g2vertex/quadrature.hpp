#ifndef G2VERTEX_QUADRATURE_HPP
#define G2VERTEX_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace g2v {

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Tanh-sinh quadrature on [a, b] with level doubling until the estimate is
/// stable to `tol` (absolute, relative to the accumulated magnitude).
/// Throws QuadratureFailure when the refinement depth is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

/// Integral over [0, inf) of an exponentially decaying integrand. The domain
/// is truncated where |f| falls below 1e-16 of the accumulated scale.
double integrate_half_line(const std::function<double(double)>& f, double tol = 1e-12);

/// Integral over the whole real line, same truncation rule.
double integrate_real_line(const std::function<double(double)>& f, double tol = 1e-12);

}  // namespace g2v

#endif
