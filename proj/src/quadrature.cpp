#include "g2vertex/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace g2v {

namespace {

// Abscissas x = tanh((pi/2) sinh t) on (-1, 1); |t| beyond ~3.8 contributes
// below 1e-17 for bounded integrands.
constexpr double kTmax = 3.8;
constexpr int kMaxLevel = 11;

double transform(double t, double& weight) {
  const double half_pi = M_PI / 2.0;
  const double s = half_pi * std::sinh(t);
  const double x = std::tanh(s);
  const double c = std::cosh(s);
  weight = half_pi * std::cosh(t) / (c * c);
  return x;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double mid = 0.5 * (a + b);
  const double radius = 0.5 * (b - a);

  auto g = [&](double x) { return f(mid + radius * x); };

  // sum accumulates w_k g(x_k) over every node seen so far; halving the step
  // only adds the odd multiples of the new step
  double w0;
  const double x0 = transform(0.0, w0);
  double sum = g(x0) * w0;
  double h = 1.0;
  for (double t = h; t <= kTmax; t += h) {
    double wp, wm;
    const double xp = transform(t, wp);
    const double xm = transform(-t, wm);
    sum += g(xp) * wp + g(xm) * wm;
  }
  double previous = sum * h * radius;

  for (int level = 1; level <= kMaxLevel; ++level) {
    const double step = h / 2.0;
    for (double t = step; t <= kTmax; t += h) {
      double wp, wm;
      const double xp = transform(t, wp);
      const double xm = transform(-t, wm);
      sum += g(xp) * wp + g(xm) * wm;
    }
    h = step;
    const double estimate = sum * h * radius;
    if (std::abs(estimate - previous) <= tol * std::max(1.0, std::abs(estimate)))
      return estimate;
    previous = estimate;
  }
  throw QuadratureFailure("tanh-sinh refinement exhausted");
}

namespace {

// truncation point where |f| has decayed below 1e-16 of its bulk scale
double truncation_point(const std::function<double(double)>& f, bool both_sides) {
  double scale = 0.0;
  for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    scale = std::max(scale, std::abs(f(x)));
    if (both_sides) scale = std::max(scale, std::abs(f(-x)));
  }
  if (scale == 0.0) scale = 1.0;
  const double floor = 1e-16 * scale;
  double upper = 16.0;
  while (upper < 2e4) {
    bool decayed = std::abs(f(upper)) < floor && std::abs(f(0.75 * upper)) < floor;
    if (both_sides)
      decayed = decayed && std::abs(f(-upper)) < floor && std::abs(f(-0.75 * upper)) < floor;
    if (decayed) return upper;
    upper *= 2.0;
  }
  throw QuadratureFailure("integrand does not decay within the truncation window");
}

// geometric panels keep tanh-sinh effective on long decaying tails
double integrate_panels(const std::function<double(double)>& f, double lo_edge, double upper,
                        double tol) {
  double total = 0.0;
  double lo = lo_edge;
  double hi = std::max(1.0, 2.0 * std::abs(lo_edge));
  while (lo < upper) {
    const double stop = std::min(hi, upper);
    total += integrate(f, lo, stop, tol);
    lo = stop;
    hi *= 4.0;
  }
  return total;
}

}  // namespace

double integrate_half_line(const std::function<double(double)>& f, double tol) {
  const double upper = truncation_point(f, false);
  return integrate_panels(f, 0.0, upper, tol);
}

double integrate_real_line(const std::function<double(double)>& f, double tol) {
  const double upper = truncation_point(f, true);
  double total = integrate_panels(f, 0.0, upper, tol);
  total += integrate_panels([&f](double x) { return f(-x); }, 0.0, upper, tol);
  return total;
}

}  // namespace g2v
