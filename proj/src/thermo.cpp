#include "g2vertex/thermo.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "g2vertex/bethe.hpp"
#include "g2vertex/quadrature.hpp"

namespace g2v {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double density(int level, double xi) {
  const double p = kPi * xi;
  switch (level) {
    case 1:
      if (std::abs(p) > 700.0) return std::exp(-std::abs(p));
      return 1.0 / (2.0 * std::cosh(p));
    case 2: {
      if (std::abs(p) > 2100.0) return std::exp(-std::abs(p) / 6.0) / (2.0 * std::sqrt(3.0));
      return std::cosh(p / 6.0) / (2.0 * std::sqrt(3.0) * (std::cosh(p / 3.0) + 0.5));
    }
    case 3: {
      if (std::abs(p) > 700.0) {
        const double amp = (std::sqrt(2.0) - std::sqrt(2.0 / 3.0)) / 4.0;
        return amp * std::exp(-std::abs(p) / 6.0);
      }
      const double bracket = 1.0 +
                             std::sqrt(2.0) * std::sinh(p / 2.0) * std::sinh(p / 3.0) -
                             std::sqrt(2.0 / 3.0) * std::cosh(p / 2.0) * std::cosh(p / 3.0);
      return bracket / (2.0 * std::cosh(p));
    }
    default:
      throw std::invalid_argument("density level must be 1, 2 or 3");
  }
}

double kernel(int l, int j, double xi) {
  auto p = [xi](double s) { return psi(s, xi); };
  if (l > j) std::swap(l, j);
  if (l == 1 && j == 1) return p(1.0);
  if (l == 1 && j == 2) return -p(1.5);
  if (l == 1 && j == 3) return p(1.0) + p(2.0);
  if (l == 2 && j == 2) return p(3.0);
  if (l == 2 && j == 3) return -p(2.5) - p(1.5) - p(0.5);
  if (l == 3 && j == 3) return 2.0 * p(1.0) + 2.0 * p(2.0) + p(3.0);
  throw std::invalid_argument("kernel indices must be 1..3");
}

double density_equation_residual(int level, double xi, double quad_tol) {
  double conv = 0.0;
  for (int j = 1; j <= 3; ++j) {
    conv += integrate_real_line(
        [level, j, xi](double y) { return kernel(level, j, xi - y) * density(j, y); },
        quad_tol);
  }
  const double drive = (level == 1 ? psi(0.5, xi) : 0.0) + (level == 3 ? psi(1.5, xi) : 0.0);
  return 2.0 * kPi * density(level, xi) + conv - drive;
}

double verify_density_equations(const std::vector<double>& grid, double quad_tol) {
  double worst = 0.0;
  for (double xi : grid)
    for (int l = 1; l <= 3; ++l)
      worst = std::max(worst, std::abs(density_equation_residual(l, xi, quad_tol)));
  return worst;
}

EnergyDensity ground_energy_density() {
  EnergyDensity out;
  const double s3 = std::sqrt(3.0);
  out.closed = -kPi * (9.0 - 2.0 * s3) / 18.0 - std::log(2.0 + s3) / s3 + 17.0 / 12.0;
  const double i1 = integrate_real_line(
      [](double xi) { return density(1, xi) / (0.25 + xi * xi); }, 1e-13);
  const double i3 = integrate_real_line(
      [](double xi) { return density(3, xi) / (2.25 + xi * xi); }, 1e-13);
  out.quadrature = -i1 - 3.0 * i3 + 17.0 / 12.0;
  return out;
}

std::pair<double, double> sound_velocities() {
  // |d log rho / d xi| at large rapidity; the correction terms decay
  // exponentially, so a modest evaluation point is already asymptotic
  auto log_slope = [](int level, double xi, double h) {
    return (std::log(density(level, xi + h)) - std::log(density(level, xi - h))) / (2.0 * h);
  };
  const double v1 = std::abs(log_slope(1, 6.0, 1e-3));
  const double v2 = std::abs(log_slope(2, 60.0, 1e-3));
  const double v3 = std::abs(log_slope(3, 60.0, 1e-3));
  if (std::abs(v2 - v3) > 1e-6 * std::max(v2, v3))
    throw std::runtime_error("levels 2 and 3 should share their decay rate");
  return {v1, 0.5 * (v2 + v3)};
}

double ground_energy(int chain_length) {
  return energy_from_roots(ground_state_roots(chain_length), chain_length);
}

double excitation_energy(int chain_length) {
  return energy_from_roots(excited_state_roots(chain_length), chain_length);
}

std::vector<std::pair<int, double>> central_charge_sequence(const std::vector<int>& sizes) {
  const double einf = ground_energy_density().closed;
  std::vector<std::pair<int, double>> out;
  out.reserve(sizes.size());
  for (int len : sizes) {
    const double e0 = ground_energy(len);
    out.emplace_back(len, -(e0 - len * einf) * 6.0 * len / (kPi * kPi));
  }
  return out;
}

std::vector<std::pair<int, double>> dimension_sequence(const std::vector<int>& sizes) {
  std::vector<std::pair<int, double>> out;
  out.reserve(sizes.size());
  for (int len : sizes) {
    const double gap = excitation_energy(len) - ground_energy(len);
    out.emplace_back(len, gap * len / (2.0 * kPi * kPi));
  }
  return out;
}

Extrapolation extrapolate(const std::vector<std::pair<int, double>>& sequence) {
  const int n = static_cast<int>(sequence.size());
  if (n < 4) throw std::invalid_argument("extrapolation needs at least 4 points");
  for (int i = 1; i < n; ++i)
    if (sequence[static_cast<size_t>(i)].first <= sequence[static_cast<size_t>(i) - 1].first)
      throw std::invalid_argument("extrapolation needs strictly increasing L");

  constexpr int window = 4;
  auto fit_window = [&](int start) {
    Eigen::MatrixXd design(window, 3);
    Eigen::VectorXd rhs(window);
    for (int i = 0; i < window; ++i) {
      const double len = sequence[static_cast<size_t>(start + i)].first;
      design(i, 0) = 1.0;
      design(i, 1) = 1.0 / (len * len);
      design(i, 2) = 1.0 / (len * len * len * len);
      rhs(i) = sequence[static_cast<size_t>(start + i)].second;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(2);
    if (!(cond < 1e12)) {
      std::ostringstream msg;
      msg << "design matrix condition number " << cond;
      throw IllConditionedFit(msg.str());
    }
    return svd.solve(rhs)(0);
  };

  std::vector<double> limits;
  for (int start = 0; start + window <= n; ++start) limits.push_back(fit_window(start));
  const double limit = limits.back();  // largest-L window
  double spread = 0.0;
  for (double a : limits) spread = std::max(spread, std::abs(a - limit));
  return {limit, spread};
}

}  // namespace g2v
