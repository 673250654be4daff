#include "g2vertex/free_energy.hpp"

#include <cmath>
#include <sstream>

#include "g2vertex/quadrature.hpp"

namespace g2v {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};

SignedLog log_gamma_signed(double x) {
  if (x > 0.0) return {std::lgamma(x), 1};
  if (x == std::floor(x)) {
    std::ostringstream msg;
    msg << "gamma pole at nonpositive integer argument " << x;
    throw GammaPole(msg.str());
  }
  // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  const double s = std::sin(kPi * x);
  return {std::log(kPi) - std::log(std::abs(s)) - std::lgamma(1.0 - x), s > 0 ? 1 : -1};
}

SignedLog log_of(double v) {
  if (v == 0.0) throw GammaPole("vanishing prefactor inside a regime");
  return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

struct Product {
  double log_abs = 0.0;
  int sign = 1;
  void mul(const SignedLog& t) {
    log_abs += t.log_abs;
    sign *= t.sign;
  }
  void div(const SignedLog& t) {
    log_abs -= t.log_abs;
    sign *= t.sign;
  }
  double value() const { return sign * std::exp(log_abs); }
};

double kappa_regime1_raw(double lambda) {
  const double t = lambda / 12.0;
  Product p;
  p.mul(log_of(1728.0));
  p.mul(log_of(1.0 / std::tan(kPi / 4.0 + kPi * t)));
  for (double arg : {7.0 / 12.0 - t, 1.0 / 6.0 - t, -t, 2.0 / 3.0 + t, 13.0 / 12.0 + t,
                     3.0 / 2.0 + t})
    p.mul(log_gamma_signed(arg));
  for (double arg : {7.0 / 12.0 + t, 1.0 / 6.0 + t, t, -1.0 / 3.0 - t, 1.0 / 12.0 - t,
                     1.0 / 2.0 - t})
    p.div(log_gamma_signed(arg));
  return p.value();
}

double kappa_regime3_raw(double lambda) {
  const double t = lambda / 12.0;
  Product p;
  p.mul(log_of(1728.0));
  p.mul(log_of(std::tan(3.0 * kPi / 4.0 + kPi * t)));
  for (double arg : {7.0 / 12.0 - t, 1.0 / 6.0 - t, 1.0 - t, 1.0 / 2.0 + t, 2.0 / 3.0 + t,
                     13.0 / 12.0 + t})
    p.mul(log_gamma_signed(arg));
  for (double arg : {7.0 / 12.0 + t, 1.0 / 6.0 + t, 1.0 + t, -1.0 / 2.0 - t, -1.0 / 3.0 - t,
                     1.0 / 12.0 - t})
    p.div(log_gamma_signed(arg));
  return p.value();
}

double kappa_regime2_raw(double lambda) {
  const double t = lambda / 12.0;
  Product p;
  p.mul(log_of(32.0 / kPi));
  p.mul({(1.5 - lambda / 4.0) * std::log(3.0), 1});
  p.mul(log_of(1.0 / std::tan(kPi * lambda / 2.0)));
  p.mul(log_of(std::tan(3.0 * kPi / 4.0 + kPi * t)));
  p.mul(log_of(std::tan(kPi / 6.0 + kPi * t)));
  for (double arg : {7.0 / 12.0 - t, 1.0 / 6.0 - t, 5.0 / 6.0 - t, 1.0 - t, -t,
                     3.0 / 2.0 + t, 13.0 / 12.0 + t})
    p.mul(log_gamma_signed(arg));
  for (double arg : {7.0 / 12.0 + t, 1.0 / 12.0 - t, -1.0 - lambda / 4.0, 1.0 / 2.0 - t,
                     1.0 + t})
    p.div(log_gamma_signed(arg));
  return p.value();
}

double kappa_raw(Regime r, double lambda) {
  switch (r) {
    case Regime::I: return kappa_regime1_raw(lambda);
    case Regime::II: return kappa_regime2_raw(lambda);
    default: return kappa_regime3_raw(lambda);
  }
}

bool near(double x, double y, double eps) { return std::abs(x - y) < eps; }

// removable pole/zero pairings inside the open regime intervals
bool is_removable_point(Regime r, double lambda, double eps) {
  switch (r) {
    case Regime::I: return near(lambda, 0.0, eps);
    case Regime::II:
      return near(lambda, -2.0, eps) || near(lambda, -3.0, eps) || near(lambda, -4.0, eps);
    default: return near(lambda, -6.0, eps);
  }
}

double nearest_removable(Regime r, double lambda) {
  switch (r) {
    case Regime::I: return 0.0;
    case Regime::II: {
      double best = -2.0;
      for (double p : {-3.0, -4.0})
        if (std::abs(lambda - p) < std::abs(lambda - best)) best = p;
      return best;
    }
    default: return -6.0;
  }
}

}  // namespace

RegimeInterval regime_interval(Regime r) {
  switch (r) {
    case Regime::I: return {-1.5, 0.5};
    case Regime::II: return {-4.5, -1.5};
    default: return {-6.5, -4.5};
  }
}

Regime regime_of(double lambda) {
  if (lambda >= -1.5) return Regime::I;
  if (lambda >= -4.5) return Regime::II;
  return Regime::III;
}

double kappa_closed(Regime r, double lambda) {
  const RegimeInterval iv = regime_interval(r);
  if (lambda < iv.lo - 1e-9 || lambda > iv.hi + 1e-9) {
    std::ostringstream msg;
    msg << "lambda " << lambda << " outside regime interval [" << iv.lo << ", " << iv.hi << "]";
    throw std::invalid_argument(msg.str());
  }
  if (is_removable_point(r, lambda, 1e-9)) {
    // paired one-sided offsets with one Richardson step
    const double p = nearest_removable(r, lambda);
    const double h = 1e-6;
    auto avg = [&](double step) {
      return 0.5 * (kappa_raw(r, p + step) + kappa_raw(r, p - step));
    };
    return (4.0 * avg(h / 2.0) - avg(h)) / 3.0;
  }
  return kappa_raw(r, lambda);
}

double kappa_infinity(double lambda) { return kappa_closed(regime_of(lambda), lambda); }

double f_integral(Regime r, double lambda) {
  if (r == Regime::III)
    throw std::invalid_argument("integral representation covers regimes I and II");
  const RegimeInterval iv = regime_interval(r);
  if (lambda < iv.lo - 1e-12 || lambda > iv.hi + 1e-12)
    throw std::invalid_argument("lambda outside the regime interval");

  if (r == Regime::I) {
    if (lambda <= -1.0)
      throw QuadratureFailure("regime-I integrand stops decaying for lambda <= -1");
    const double i1 = integrate_half_line(
        [lambda](double x) {
          if (x < 1e-12) return lambda;
          return std::sinh(x * lambda) * std::exp(-x / 2.0) / (x * std::cosh(x / 2.0));
        },
        1e-13);
    const double i2 = integrate_half_line(
        [lambda](double x) {
          if (x < 1e-12) return lambda;
          return std::sinh(x * lambda) * std::exp(-1.5 * x) * std::cosh(x) /
                 (x * std::cosh(x / 2.0) * std::cosh(3.0 * x));
        },
        1e-13);
    const double a1 = std::abs((lambda + 1.0) * (lambda + 4.0) * (lambda + 6.0));
    return std::log(a1) - i1 - i2;
  }

  // regime II, dominated by the third dressing term
  if (lambda <= -4.0 || lambda >= -1.0)
    throw QuadratureFailure("regime-II integrand stops decaying outside (-4, -1)");
  const double j1 = integrate_half_line(
      [lambda](double x) {
        if (x < 1e-12) return lambda + 2.5;
        return std::sinh((lambda + 2.5) * x) * std::exp(-x) / (x * std::cosh(x / 2.0));
      },
      1e-13);
  const double j2 = integrate_half_line(
      [lambda](double x) {
        if (x < 1e-12) return 0.5;
        return std::cosh((lambda + 3.0) * x) * std::sinh(x / 2.0) * std::cosh(x) *
               std::exp(-1.5 * x) / (x * std::cosh(3.0 * x));
      },
      1e-13);
  const double a3 = std::abs(lambda * (lambda + 4.0) * (lambda + 6.0));
  return std::log(a3) - j1 + 4.0 * j2;
}

// Closed form obtained by expanding 1/(cosh x - cos(m pi/n)) in a geometric
// sine series and resumming the Frullani logarithms into gamma functions:
//   I = (2/sin(m pi/n)) sum_{k=1}^{n-1} sin(m pi k/n)
//       log[ G((a+k)/2n) G((n+b+k)/2n) / (G((b+k)/2n) G((n+a+k)/2n)) ].
// Validated against the quadrature oracle over the admissible domain.
double appendix_integral(double a, double b, int n, int m) {
  if (m % 2 == 0 || m <= 0 || m >= 2 * n) {
    std::ostringstream msg;
    msg << "appendix integral needs odd m with 0 < m < 2n, got m=" << m << ", n=" << n;
    throw DomainError(msg.str());
  }
  if (a <= -1.0 || b <= -1.0) throw DomainError("appendix integral needs a, b > -1");
  const double n2 = 2.0 * n;
  double sum = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    const double weight = std::sin(m * kPi * k / n);
    const double term = std::lgamma((a + k) / n2) + std::lgamma((n + b + k) / n2) -
                        std::lgamma((b + k) / n2) - std::lgamma((n + a + k) / n2);
    sum += weight * term;
  }
  return 2.0 / std::sin(m * kPi / n) * sum;
}

double appendix_integral_quadrature(double a, double b, int n, int m, double tol) {
  if (m % 2 == 0 || m <= 0 || m >= 2 * n) throw DomainError("odd m with 0 < m < 2n required");
  const double c = std::cos(m * kPi / n);
  return integrate_half_line(
      [a, b, c](double x) {
        if (x < 1e-10) return (b - a) / (1.0 - c);
        const double num = std::expm1(-a * x) - std::expm1(-b * x);
        return num / (x * (std::cosh(x) - c));
      },
      tol);
}

double trig_identity_residual_main(double x) {
  const double ch = std::cosh(x / 2.0);
  const double lhs = std::cosh(x) / (ch * std::cosh(3.0 * x));
  const double s3 = std::sqrt(3.0);
  const double rhs =
      1.0 / ch +
      (2.0 * s3 - 3.0) / 12.0 *
          (1.0 / (ch - std::cos(kPi / 12.0)) + 1.0 / (ch - std::cos(11.0 * kPi / 12.0))) -
      (2.0 * s3 + 3.0) / 12.0 *
          (1.0 / (ch - std::cos(5.0 * kPi / 12.0)) + 1.0 / (ch - std::cos(7.0 * kPi / 12.0)));
  return std::abs(lhs - rhs);
}

double trig_identity_residual_second(double x) {
  const double ch = std::cosh(x);
  const double lhs = ch / std::cosh(3.0 * x);
  const double rhs = 1.0 / (4.0 * std::sqrt(3.0)) *
                     (1.0 / (ch - std::cos(kPi / 6.0)) - 1.0 / (ch - std::cos(5.0 * kPi / 6.0)));
  return std::abs(lhs - rhs);
}

CornerReport corner_analysis(double boundary, double step) {
  if (!(step > 0.0 && step < 0.1)) throw std::invalid_argument("step must lie in (0, 0.1)");
  const bool at_32 = near(boundary, -1.5, 1e-12);
  const bool at_92 = near(boundary, -4.5, 1e-12);
  if (!at_32 && !at_92)
    throw std::invalid_argument("corner analysis applies at -3/2 and -9/2 only");

  const Regime left = at_32 ? Regime::II : Regime::III;
  const Regime right = at_32 ? Regime::I : Regime::II;

  // boundary values by Richardson pairing of one-sided evaluations
  const double eps = 1e-6;
  auto boundary_value = [&](Regime r, double sign) {
    const double f1 = kappa_closed(r, boundary + sign * eps);
    const double f2 = kappa_closed(r, boundary + sign * eps / 2.0);
    return 2.0 * f2 - f1;
  };
  const double kappa_left = boundary_value(left, -1.0);
  const double kappa_right = boundary_value(right, +1.0);

  auto one_sided_slope = [&](Regime r, double sign, double base) {
    const double f1 = kappa_closed(r, boundary + sign * step);
    const double f2 = kappa_closed(r, boundary + sign * 2.0 * step);
    return sign * (-3.0 * base + 4.0 * f1 - f2) / (2.0 * step);
  };

  CornerReport report;
  report.boundary = boundary;
  report.gap = std::abs(kappa_left - kappa_right);
  report.slope_left = one_sided_slope(left, -1.0, kappa_left);
  report.slope_right = one_sided_slope(right, +1.0, kappa_right);
  return report;
}

double kappa_finite(const BetheState& roots, int chain_length, double lambda) {
  return std::exp(log_abs_eigenvalue(Complex(lambda, 0.0), roots, chain_length) /
                  chain_length);
}

double kappa_finite(int chain_length, double lambda) {
  return kappa_finite(ground_state_roots(chain_length), chain_length, lambda);
}

}  // namespace g2v
