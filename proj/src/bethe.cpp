#include "g2vertex/bethe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <cstdio>
#include <cstdlib>

#include "g2vertex/thermo.hpp"

namespace g2v {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI{0.0, 1.0};

double fold_mod_2pi(double x) { return x - 2.0 * kPi * std::round(x / (2.0 * kPi)); }

double clamp_tan(double x) {
  // keep inverse counting-function seeds finite at the band edge
  const double limit = kPi / 2.0 * (1.0 - 1e-9);
  return std::tan(std::clamp(x, -limit, limit));
}

double counting3_inverse(double z) {
  // z in (-1/4, 1/4); monotone cumulative of the level-3 density from 0
  static const auto table = [] {
    constexpr int n = 6000;
    constexpr double xmax = 40.0;
    std::vector<double> cum(n + 1, 0.0);
    const double h = xmax / n;
    double acc = 0.0;
    double prev = density(3, 0.0);
    for (int i = 1; i <= n; ++i) {
      const double cur = density(3, i * h);
      acc += 0.5 * (prev + cur) * h;
      cum[static_cast<size_t>(i)] = acc;
      prev = cur;
    }
    return std::pair<std::vector<double>, double>(cum, h);
  }();
  const auto& cum = table.first;
  const double h = table.second;
  const double za = std::min(std::abs(z), cum.back() * (1.0 - 1e-12));
  const auto it = std::lower_bound(cum.begin(), cum.end(), za);
  size_t hi = static_cast<size_t>(it - cum.begin());
  if (hi == 0) hi = 1;
  const double frac = (za - cum[hi - 1]) / std::max(cum[hi] - cum[hi - 1], 1e-300);
  const double x = (static_cast<double>(hi - 1) + frac) * h;
  return z >= 0 ? x : -x;
}

std::vector<double> arithmetic_q(int count, double top) {
  std::vector<double> q(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) q[static_cast<size_t>(j)] = top - j;
  return q;
}

}  // namespace

double phi(double s, double x) { return 2.0 * std::atan(x / s); }
double psi(double s, double x) { return 2.0 * s / (s * s + x * x); }

QuantumNumbers ground_quantum_numbers(int chain_length) {
  if (chain_length % 2 != 0) throw std::invalid_argument("ground state requires even L");
  const int half = chain_length / 2;
  QuantumNumbers q;
  q.q1 = arithmetic_q(half, (half - 1) / 2.0);
  q.q2 = arithmetic_q(chain_length, (chain_length - 1) / 2.0);
  q.q3 = arithmetic_q(half, (half - 1) / 2.0);
  return q;
}

namespace {

struct StringSystem {
  int chain_length;
  const QuantumNumbers& q;
  int m1, m2, m3;

  explicit StringSystem(int len, const QuantumNumbers& qn)
      : chain_length(len), q(qn), m1(static_cast<int>(qn.q1.size())),
        m2(static_cast<int>(qn.q2.size())), m3(static_cast<int>(qn.q3.size())) {}

  int size() const { return m1 + m2 + m3; }

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const double* x1 = x.data();
    const double* x2 = x.data() + m1;
    const double* x3 = x.data() + m1 + m2;
    const double len = chain_length;
    for (int j = 0; j < m1; ++j) {
      double r = len * phi(0.5, x1[j]) - 2.0 * kPi * q.q1[static_cast<size_t>(j)];
      for (int k = 0; k < m1; ++k)
        if (k != j) r -= phi(1.0, x1[j] - x1[k]);
      for (int k = 0; k < m2; ++k) r += phi(1.5, x1[j] - x2[k]);
      for (int k = 0; k < m3; ++k)
        r -= phi(1.0, x1[j] - x3[k]) + phi(2.0, x1[j] - x3[k]);
      f(j) = r;
    }
    for (int j = 0; j < m2; ++j) {
      double r = 2.0 * kPi * q.q2[static_cast<size_t>(j)];
      for (int k = 0; k < m2; ++k)
        if (k != j) r += phi(3.0, x2[j] - x2[k]);
      for (int k = 0; k < m3; ++k)
        r -= phi(2.5, x2[j] - x3[k]) + phi(1.5, x2[j] - x3[k]) + phi(0.5, x2[j] - x3[k]);
      for (int k = 0; k < m1; ++k) r -= phi(1.5, x2[j] - x1[k]);
      f(m1 + j) = r;
    }
    for (int j = 0; j < m3; ++j) {
      double r = len * phi(1.5, x3[j]) - 2.0 * kPi * q.q3[static_cast<size_t>(j)];
      for (int k = 0; k < m3; ++k)
        if (k != j)
          r -= 2.0 * phi(1.0, x3[j] - x3[k]) + 2.0 * phi(2.0, x3[j] - x3[k]) +
               phi(3.0, x3[j] - x3[k]);
      for (int k = 0; k < m2; ++k)
        r += phi(2.5, x3[j] - x2[k]) + phi(1.5, x3[j] - x2[k]) + phi(0.5, x3[j] - x2[k]);
      for (int k = 0; k < m1; ++k)
        r -= phi(1.0, x3[j] - x1[k]) + phi(2.0, x3[j] - x1[k]);
      f(m1 + m2 + j) = r;
    }
  }

  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    const double* x1 = x.data();
    const double* x2 = x.data() + m1;
    const double* x3 = x.data() + m1 + m2;
    const double len = chain_length;
    jac.setZero();
    const int o2 = m1, o3 = m1 + m2;
    for (int j = 0; j < m1; ++j) {
      double d = len * psi(0.5, x1[j]);
      for (int k = 0; k < m1; ++k) {
        if (k == j) continue;
        const double w = psi(1.0, x1[j] - x1[k]);
        d -= w;
        jac(j, k) = w;
      }
      for (int k = 0; k < m2; ++k) {
        const double w = psi(1.5, x1[j] - x2[k]);
        d += w;
        jac(j, o2 + k) = -w;
      }
      for (int k = 0; k < m3; ++k) {
        const double w = psi(1.0, x1[j] - x3[k]) + psi(2.0, x1[j] - x3[k]);
        d -= w;
        jac(j, o3 + k) = w;
      }
      jac(j, j) = d;
    }
    for (int j = 0; j < m2; ++j) {
      double d = 0.0;
      for (int k = 0; k < m2; ++k) {
        if (k == j) continue;
        const double w = psi(3.0, x2[j] - x2[k]);
        d += w;
        jac(o2 + j, o2 + k) = -w;
      }
      for (int k = 0; k < m3; ++k) {
        const double w = psi(2.5, x2[j] - x3[k]) + psi(1.5, x2[j] - x3[k]) +
                         psi(0.5, x2[j] - x3[k]);
        d -= w;
        jac(o2 + j, o3 + k) = w;
      }
      for (int k = 0; k < m1; ++k) {
        const double w = psi(1.5, x2[j] - x1[k]);
        d -= w;
        jac(o2 + j, k) = w;
      }
      jac(o2 + j, o2 + j) = d;
    }
    for (int j = 0; j < m3; ++j) {
      double d = len * psi(1.5, x3[j]);
      for (int k = 0; k < m3; ++k) {
        if (k == j) continue;
        const double w = 2.0 * psi(1.0, x3[j] - x3[k]) + 2.0 * psi(2.0, x3[j] - x3[k]) +
                         psi(3.0, x3[j] - x3[k]);
        d -= w;
        jac(o3 + j, o3 + k) = w;
      }
      for (int k = 0; k < m2; ++k) {
        const double w = psi(2.5, x3[j] - x2[k]) + psi(1.5, x3[j] - x2[k]) +
                         psi(0.5, x3[j] - x2[k]);
        d += w;
        jac(o3 + j, o2 + k) = -w;
      }
      for (int k = 0; k < m1; ++k) {
        const double w = psi(1.0, x3[j] - x1[k]) + psi(2.0, x3[j] - x1[k]);
        d -= w;
        jac(o3 + j, k) = w;
      }
      jac(o3 + j, o3 + j) = d;
    }
  }
};

}  // namespace

StringState solve_string_system(int chain_length, const QuantumNumbers& q,
                                const StringSolveOptions& options) {
  for (const auto* seq : {&q.q1, &q.q2, &q.q3}) {
    for (size_t a = 0; a < seq->size(); ++a)
      for (size_t b = a + 1; b < seq->size(); ++b)
        if ((*seq)[a] == (*seq)[b])
          throw std::invalid_argument("quantum numbers must be pairwise distinct per level");
  }
  const StringSystem sys(chain_length, q);
  const int n = sys.size();
  Eigen::VectorXd x(n);

  // seeds from the asymptotic counting functions of each level
  const double len = chain_length;
  for (int j = 0; j < sys.m1; ++j)
    x(j) = std::asinh(clamp_tan(2.0 * kPi * q.q1[static_cast<size_t>(j)] / len)) / kPi;
  for (int j = 0; j < sys.m2; ++j)
    x(sys.m1 + j) = 6.0 / kPi *
                    std::asinh(std::sqrt(3.0) / 2.0 *
                               clamp_tan(kPi * q.q2[static_cast<size_t>(j)] / len));
  for (int j = 0; j < sys.m3; ++j)
    x(sys.m1 + sys.m2 + j) = counting3_inverse(q.q3[static_cast<size_t>(j)] / len);

  Eigen::VectorXd f(n), fnew(n), step(n);
  Eigen::MatrixXd jac(n, n);
  sys.residual(x, f);
  double fnorm = f.lpNorm<Eigen::Infinity>();

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (fnorm < options.tol) break;
    sys.jacobian(x, jac);
    step = jac.partialPivLu().solve(-f);
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h) {
      const Eigen::VectorXd trial = x + alpha * step;
      sys.residual(trial, fnew);
      const double trial_norm = fnew.lpNorm<Eigen::Infinity>();
      if (trial_norm < fnorm) {
        x = trial;
        f = fnew;
        fnorm = trial_norm;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || (alpha * step.lpNorm<Eigen::Infinity>() < 1e-13 && fnorm > options.tol)) {
      if (fnorm < 1e-10) break;  // converged to working precision
      std::vector<Complex> last(x.data(), x.data() + n);
      std::ostringstream msg;
      msg << "string-system Newton stalled at residual " << fnorm << " (L=" << chain_length
          << ")";
      throw NewtonDivergence(msg.str(), std::move(last));
    }
  }
  if (fnorm > 1e-10) {
    std::vector<Complex> last(x.data(), x.data() + n);
    std::ostringstream msg;
    msg << "string-system Newton did not reach tolerance: residual " << fnorm;
    throw NewtonDivergence(msg.str(), std::move(last));
  }

  StringState out;
  out.xi1.assign(x.data(), x.data() + sys.m1);
  out.xi2.assign(x.data() + sys.m1, x.data() + sys.m1 + sys.m2);
  out.xi3.assign(x.data() + sys.m1 + sys.m2, x.data() + n);
  out.q1 = q.q1;
  out.q2 = q.q2;
  out.q3 = q.q3;
  out.residual = fnorm;
  return out;
}

BetheState reconstruct_from_strings(const StringState& s, double deviation) {
  BetheState state;
  state.roots1.reserve(s.xi1.size() + 3 * s.xi3.size());
  for (double xi : s.xi1) state.roots1.emplace_back(xi, 0.0);
  for (double xi : s.xi3) {
    state.roots1.emplace_back(xi, 1.0 + deviation);
    state.roots1.emplace_back(xi, 0.0);
    state.roots1.emplace_back(xi, -(1.0 + deviation));
  }
  for (double xi : s.xi2) state.roots2.emplace_back(xi, 0.0);
  state.residual = 0.0;
  return state;
}

namespace {

struct RawSystem {
  int chain_length;
  int n1, n2;
  std::vector<double> branch;  // 2 pi multiples frozen from the seed

  Complex log_ratio(Complex z, Complex a, Complex b) const {
    return std::log((z + a) / (z + b));
  }

  // residual without the branch subtraction
  void bare(const std::vector<Complex>& u, const std::vector<Complex>& v,
            Eigen::VectorXcd& f) const {
    const double len = chain_length;
    for (int j = 0; j < n1; ++j) {
      Complex r = len * std::log((u[static_cast<size_t>(j)] + 0.5 * kI) /
                                 (u[static_cast<size_t>(j)] - 0.5 * kI));
      for (int k = 0; k < n1; ++k) {
        if (k == j) continue;
        const Complex d = u[static_cast<size_t>(j)] - u[static_cast<size_t>(k)];
        r -= std::log((d + kI) / (d - kI));
      }
      for (int k = 0; k < n2; ++k) {
        const Complex d = u[static_cast<size_t>(j)] - v[static_cast<size_t>(k)];
        r -= std::log((d - 1.5 * kI) / (d + 1.5 * kI));
      }
      f(j) = r;
    }
    for (int j = 0; j < n2; ++j) {
      Complex r = 0.0;
      for (int k = 0; k < n2; ++k) {
        if (k == j) continue;
        const Complex d = v[static_cast<size_t>(j)] - v[static_cast<size_t>(k)];
        r += std::log((d + 3.0 * kI) / (d - 3.0 * kI));
      }
      for (int k = 0; k < n1; ++k) {
        const Complex d = v[static_cast<size_t>(j)] - u[static_cast<size_t>(k)];
        r -= std::log((d + 1.5 * kI) / (d - 1.5 * kI));
      }
      f(n1 + j) = r;
    }
  }

  void residual(const std::vector<Complex>& u, const std::vector<Complex>& v,
                Eigen::VectorXcd& f) const {
    bare(u, v, f);
    for (int i = 0; i < n1 + n2; ++i)
      f(i) -= Complex(0.0, 2.0 * kPi * branch[static_cast<size_t>(i)]);
  }

  void jacobian(const std::vector<Complex>& u, const std::vector<Complex>& v,
                Eigen::MatrixXcd& jac) const {
    const double len = chain_length;
    jac.setZero();
    auto pair_term = [](Complex d, Complex shift) {
      return 1.0 / (d + shift) - 1.0 / (d - shift);
    };
    for (int j = 0; j < n1; ++j) {
      Complex diag = len * pair_term(u[static_cast<size_t>(j)], 0.5 * kI);
      for (int k = 0; k < n1; ++k) {
        if (k == j) continue;
        const Complex w = pair_term(u[static_cast<size_t>(j)] - u[static_cast<size_t>(k)], kI);
        diag -= w;
        jac(j, k) = w;
      }
      for (int k = 0; k < n2; ++k) {
        const Complex w =
            pair_term(u[static_cast<size_t>(j)] - v[static_cast<size_t>(k)], -1.5 * kI);
        diag -= w;
        jac(j, n1 + k) = w;
      }
      jac(j, j) = diag;
    }
    for (int j = 0; j < n2; ++j) {
      Complex diag = 0.0;
      for (int k = 0; k < n2; ++k) {
        if (k == j) continue;
        const Complex w =
            pair_term(v[static_cast<size_t>(j)] - v[static_cast<size_t>(k)], 3.0 * kI);
        diag += w;
        jac(n1 + j, n1 + k) = -w;
      }
      for (int k = 0; k < n1; ++k) {
        const Complex w =
            pair_term(v[static_cast<size_t>(j)] - u[static_cast<size_t>(k)], 1.5 * kI);
        diag -= w;
        jac(n1 + j, k) = w;
      }
      jac(n1 + j, n1 + j) = diag;
    }
  }
};

void check_collisions(const std::vector<Complex>& roots, double threshold, const char* level) {
  for (size_t a = 0; a < roots.size(); ++a)
    for (size_t b = a + 1; b < roots.size(); ++b)
      if (std::abs(roots[a] - roots[b]) < threshold) {
        std::ostringstream msg;
        msg << level << " roots " << a << " and " << b << " collide within " << threshold;
        throw RootCollision(msg.str());
      }
}

}  // namespace

BetheState solve_raw_bethe(int chain_length, const RootCount& counts, const BetheState& seed,
                           const RawSolveOptions& options) {
  if (static_cast<int>(seed.roots1.size()) != counts.n1 ||
      static_cast<int>(seed.roots2.size()) != counts.n2)
    throw std::invalid_argument("seed root counts do not match the sector");

  RawSystem sys;
  sys.chain_length = chain_length;
  sys.n1 = counts.n1;
  sys.n2 = counts.n2;

  std::vector<Complex> u = seed.roots1, v = seed.roots2;
  const int n = sys.n1 + sys.n2;
  Eigen::VectorXcd f(n), fnew(n);
  Eigen::MatrixXcd jac(n, n);

  // freeze logarithm branches at the seed
  sys.branch.assign(static_cast<size_t>(n), 0.0);
  sys.bare(u, v, f);
  for (int i = 0; i < n; ++i)
    sys.branch[static_cast<size_t>(i)] = std::round(f(i).imag() / (2.0 * kPi));
  sys.residual(u, v, f);
  double merit = f.squaredNorm();

  auto to_vectors = [&](const Eigen::VectorXcd& delta, double alpha,
                        std::vector<Complex>& uu, std::vector<Complex>& vv) {
    uu = u;
    vv = v;
    for (int i = 0; i < sys.n1; ++i) uu[static_cast<size_t>(i)] += alpha * delta(i);
    for (int i = 0; i < sys.n2; ++i) vv[static_cast<size_t>(i)] += alpha * delta(sys.n1 + i);
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (f.lpNorm<Eigen::Infinity>() < options.tol) break;
    check_collisions(u, options.collision_threshold, "level-1");
    check_collisions(v, options.collision_threshold, "level-2");
    sys.jacobian(u, v, jac);
    Eigen::VectorXcd step = jac.partialPivLu().solve(-f);
    // keep early iterations inside the basin
    const double span = step.lpNorm<Eigen::Infinity>();
    if (span > 1.0) step *= 1.0 / span;
    double alpha = 1.0;
    bool accepted = false;
    std::vector<Complex> ut, vt;
    for (int h = 0; h <= options.max_halvings; ++h) {
      to_vectors(step, alpha, ut, vt);
      sys.residual(ut, vt, fnew);
      const double trial = fnew.squaredNorm();
      if (trial < merit) {
        u = std::move(ut);
        v = std::move(vt);
        f = fnew;
        merit = trial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (f.lpNorm<Eigen::Infinity>() < 1e-10) break;
      std::vector<Complex> last = u;
      last.insert(last.end(), v.begin(), v.end());
      std::ostringstream msg;
      msg << "raw Bethe Newton stalled at residual " << f.lpNorm<Eigen::Infinity>()
          << " (L=" << chain_length << ")";
      throw NewtonDivergence(msg.str(), std::move(last));
    }
  }
  const double fnorm = f.lpNorm<Eigen::Infinity>();
  if (fnorm > options.tol && fnorm > 1e-10) {
    std::vector<Complex> last = u;
    last.insert(last.end(), v.begin(), v.end());
    std::ostringstream msg;
    msg << "raw Bethe Newton did not reach tolerance: residual " << fnorm;
    throw NewtonDivergence(msg.str(), std::move(last));
  }

  BetheState out;
  out.roots1 = std::move(u);
  out.roots2 = std::move(v);
  out.residual = fnorm;
  return out;
}

double raw_log_residual(const BetheState& state, int chain_length) {
  RawSystem sys;
  sys.chain_length = chain_length;
  sys.n1 = static_cast<int>(state.roots1.size());
  sys.n2 = static_cast<int>(state.roots2.size());
  Eigen::VectorXcd f(sys.n1 + sys.n2);
  sys.bare(state.roots1, state.roots2, f);
  double worst = 0.0;
  for (int i = 0; i < sys.n1 + sys.n2; ++i) {
    const double re = f(i).real();
    const double im = fold_mod_2pi(f(i).imag());
    worst = std::max(worst, std::hypot(re, im));
  }
  return worst;
}

double energy_from_roots(const BetheState& state, int chain_length) {
  Complex sum = 0.0;
  for (const Complex& r : state.roots1) sum += 1.0 / (r * r + 0.25);
  return 17.0 * chain_length / 12.0 - sum.real();
}

double string_state_energy(const StringState& s, int chain_length) {
  // a three-string with exact imaginary parts contributes psi_{3/2} of its
  // center, the collapsed form of the three level-1 factors
  double sum = 0.0;
  for (double xi : s.xi1) sum += psi(0.5, xi);
  for (double xi : s.xi3) sum += psi(1.5, xi);
  return 17.0 * chain_length / 12.0 - sum;
}

namespace {

// one dressing factor product; throws on dressing poles
Complex dressing_product(const std::vector<Complex>& roots, Complex z, Complex num_shift,
                         Complex den_shift) {
  Complex g = 1.0;
  for (const Complex& r : roots) {
    const Complex den = r + z + den_shift;
    if (std::abs(den) < 1e-12) throw PoleProximity("dressing denominator vanishes");
    g *= (r + z + num_shift) / den;
  }
  return g;
}

Complex a_poly(int l, Complex lam) {
  switch (l) {
    case 1: return (lam + 1.0) * (lam + 4.0) * (lam + 6.0);
    case 2:
    case 3: return lam * (lam + 4.0) * (lam + 6.0);
    default: return lam * (lam + 3.0) * (lam + 6.0);
  }
}

Complex dressing(int l, Complex lam, const std::vector<Complex>& u,
                 const std::vector<Complex>& v) {
  const Complex z = kI * lam;
  switch (l) {
    case 1:
      return dressing_product(u, z, -0.5 * kI, 0.5 * kI);
    case 2:
      return dressing_product(u, z, 1.5 * kI, 0.5 * kI) *
             dressing_product(v, z, -kI, 2.0 * kI);
    case 3:
      return dressing_product(u, z, 1.5 * kI, 3.5 * kI) *
             dressing_product(v, z, 5.0 * kI, 2.0 * kI);
    default:
      return dressing_product(u, z, 1.5 * kI, 2.5 * kI) *
             dressing_product(u, z, 4.5 * kI, 3.5 * kI);
  }
}

struct TermList {
  // log-magnitude and phase of the seven summands
  std::vector<double> log_mag;
  std::vector<Complex> phase;  // unit modulus
};

TermList eigenvalue_terms(Complex lam, const BetheState& state, int chain_length) {
  TermList t;
  std::vector<Complex> neg1(state.roots1), neg2(state.roots2);
  for (Complex& r : neg1) r = -r;
  for (Complex& r : neg2) r = -r;

  auto push = [&](Complex base, Complex g) {
    if (std::abs(base) == 0.0 || std::abs(g) == 0.0) return;  // vanishing summand
    const double lm = chain_length * std::log(std::abs(base)) + std::log(std::abs(g));
    const double ph = chain_length * std::arg(base) + std::arg(g);
    t.log_mag.push_back(lm);
    t.phase.push_back(Complex(std::cos(ph), std::sin(ph)));
  };

  for (int l = 1; l <= 3; ++l)
    push(a_poly(l, lam), dressing(l, lam, state.roots1, state.roots2));
  push(a_poly(4, lam), dressing(4, lam, state.roots1, state.roots2));
  for (int l = 1; l <= 3; ++l)
    push(-a_poly(l, -lam - 6.0), dressing(l, -lam - 6.0, neg1, neg2));
  return t;
}

}  // namespace

Complex eigenvalue_from_roots(Complex lambda, const BetheState& state, int chain_length) {
  const TermList t = eigenvalue_terms(lambda, state, chain_length);
  if (t.log_mag.empty()) return 0.0;
  const double m = *std::max_element(t.log_mag.begin(), t.log_mag.end());
  Complex acc = 0.0;
  for (size_t i = 0; i < t.log_mag.size(); ++i)
    acc += std::exp(t.log_mag[i] - m) * t.phase[i];
  return std::exp(m) * acc;
}

double log_abs_eigenvalue(Complex lambda, const BetheState& state, int chain_length) {
  const TermList t = eigenvalue_terms(lambda, state, chain_length);
  if (t.log_mag.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(t.log_mag.begin(), t.log_mag.end());
  Complex acc = 0.0;
  for (size_t i = 0; i < t.log_mag.size(); ++i)
    acc += std::exp(t.log_mag[i] - m) * t.phase[i];
  return m + std::log(std::abs(acc));
}

namespace {

// When a one-string and a three-string center share the origin (L = 2 mod 4)
// the exact configuration splits the colliding pair along the real axis;
// nudge the seed off the singular point, keeping the multiset symmetric.
void split_origin_collision(BetheState& seed, double eps) {
  std::vector<size_t> at_origin;
  for (size_t i = 0; i < seed.roots1.size(); ++i)
    if (std::abs(seed.roots1[i]) < 1e-9) at_origin.push_back(i);
  if (at_origin.size() == 2) {
    seed.roots1[at_origin[0]] = Complex(eps, 0.0);
    seed.roots1[at_origin[1]] = Complex(-eps, 0.0);
  }
}

}  // namespace

BetheState solve_ground_from_strings(int chain_length, const StringState& s) {
  const RootCount counts{2 * chain_length, chain_length};
  std::string last_error;
  for (double dev : {2.0 / chain_length, 0.1, 0.2, 0.3, 0.05, 0.4}) {
    try {
      BetheState seed = reconstruct_from_strings(s, dev);
      split_origin_collision(seed, 0.5 * dev);
      return solve_raw_bethe(chain_length, counts, seed);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw NewtonDivergence("ground-state raw solve failed for every deviation seed: " +
                             last_error,
                         {});
}

namespace {


// Self-conjugate solver in string-resolved coordinates. Each three-string is
// parametrized by its real middle root m and the logarithm w of the complex
// deviation of the top root, t = m + i + e^w; the bottom root is the
// conjugate. The near-singular pair terms log[(t-m+i)/(t-m-i)] are written
// through w analytically, so deviations far below machine epsilon stay
// well conditioned. Only states whose level-1 content is one-strings plus
// three-strings with real middles fit this parametrization.
struct DeviationState {
  std::vector<double> xi;   // level-1 one-strings
  std::vector<double> m;    // three-string middles
  std::vector<Complex> w;   // log deviations, t = m + i + exp(w)
  std::vector<double> eta;  // level-2 roots

  int size() const {
    return static_cast<int>(xi.size() + 3 * m.size() + eta.size());
  }

  void pack(Eigen::VectorXd& x) const {
    x.resize(size());
    int p = 0;
    for (double v : xi) x(p++) = v;
    for (size_t j = 0; j < m.size(); ++j) {
      x(p++) = m[j];
      x(p++) = w[j].real();
      x(p++) = w[j].imag();
    }
    for (double v : eta) x(p++) = v;
  }

  void unpack(const Eigen::VectorXd& x) {
    int p = 0;
    for (double& v : xi) v = x(p++);
    for (size_t j = 0; j < m.size(); ++j) {
      m[j] = x(p++);
      w[j] = Complex(x(p), x(p + 1));
      p += 2;
    }
    for (double& v : eta) v = x(p++);
  }

  BetheState to_bethe(double residual) const {
    BetheState out;
    for (double v : xi) out.roots1.emplace_back(v, 0.0);
    for (size_t j = 0; j < m.size(); ++j) {
      const Complex t = Complex(m[j], 1.0) + std::exp(w[j]);
      out.roots1.push_back(t);
      out.roots1.emplace_back(m[j], 0.0);
      out.roots1.push_back(std::conj(t));
    }
    for (double v : eta) out.roots2.emplace_back(v, 0.0);
    out.residual = residual;
    return out;
  }
};

struct DeviationSystem {
  int chain_length;
  // frozen 2-pi multiples of the angle components; empty means fold to the
  // nearest multiple
  std::vector<double> branch;

  // residual layout: [xi (1 each)] [per string: top Re, top Im, sum (3)] [eta (1 each)]
  void residual(const DeviationState& s, Eigen::VectorXd& f) const {
    const int m1 = static_cast<int>(s.xi.size());
    const int m3 = static_cast<int>(s.m.size());
    const int m2 = static_cast<int>(s.eta.size());
    const double len = chain_length;

    std::vector<Complex> tops(static_cast<size_t>(m3)), devs(static_cast<size_t>(m3));
    for (int j = 0; j < m3; ++j) {
      devs[static_cast<size_t>(j)] = std::exp(s.w[static_cast<size_t>(j)]);
      tops[static_cast<size_t>(j)] = Complex(s.m[static_cast<size_t>(j)], 1.0) +
                                     devs[static_cast<size_t>(j)];
    }

    // level-1 constituents: kind 0 = one-string, 1 = top, 2 = mid, 3 = bottom
    struct Constituent {
      Complex z;
      int kind;
      int string_index;  // -1 for one-strings
    };
    std::vector<Constituent> level1;
    for (int a = 0; a < m1; ++a)
      level1.push_back({Complex(s.xi[static_cast<size_t>(a)], 0.0), 0, -1});
    for (int j = 0; j < m3; ++j) {
      level1.push_back({tops[static_cast<size_t>(j)], 1, j});
      level1.push_back({Complex(s.m[static_cast<size_t>(j)], 0.0), 2, j});
      level1.push_back({std::conj(tops[static_cast<size_t>(j)]), 3, j});
    }

    // level-1 bare equation at constituent c; the pair factor with any
    // same-string partner listed in `substitute` is replaced analytically
    auto bare1 = [&](size_t c, bool drop_singular, Complex& singular_part) -> Complex {
      const Complex z = level1[c].z;
      Complex r = len * std::log((z + 0.5 * kI) / (z - 0.5 * kI));
      singular_part = 0.0;
      for (size_t k = 0; k < level1.size(); ++k) {
        if (k == c) continue;
        const bool same_string = level1[c].string_index >= 0 &&
                                 level1[k].string_index == level1[c].string_index;
        const bool singular_pair =
            same_string && ((level1[c].kind == 1 && level1[k].kind == 2) ||
                            (level1[c].kind == 2 && level1[k].kind == 1) ||
                            (level1[c].kind == 2 && level1[k].kind == 3) ||
                            (level1[c].kind == 3 && level1[k].kind == 2));
        if (singular_pair) {
          if (drop_singular) continue;
          const int j = level1[c].string_index;
          const Complex dev = devs[static_cast<size_t>(j)];
          const Complex wj = s.w[static_cast<size_t>(j)];
          Complex value;
          if (level1[c].kind == 1) {
            // (t-m+i)/(t-m-i) = (2i + dev)/dev
            value = std::log(2.0 * kI + dev) - wj;
          } else if (level1[c].kind == 3) {
            // conjugate string: (b-m+i)/(b-m-i) = conj(dev)/(conj(dev) - 2i) inverted
            value = std::conj(wj) - std::log(std::conj(dev) - 2.0 * kI);
          } else {
            // mid against top or bottom
            if (level1[k].kind == 1)
              value = wj + Complex(0.0, kPi) - std::log(-2.0 * kI - dev);
            else
              value = std::log(2.0 * kI - std::conj(dev)) - std::conj(wj) -
                      Complex(0.0, kPi);
          }
          singular_part -= value;
          continue;
        }
        const Complex d = z - level1[k].z;
        r -= std::log((d + kI) / (d - kI));
      }
      for (int b = 0; b < m2; ++b) {
        const Complex d = z - s.eta[static_cast<size_t>(b)];
        r -= std::log((d - 1.5 * kI) / (d + 1.5 * kI));
      }
      return r;
    };

    f.resize(s.size());
    int p = 0;
    // angle-like components get their frozen 2-pi multiple subtracted; with
    // no frozen branches they are folded to the nearest multiple
    auto angle = [&](int idx, double x) {
      if (branch.empty()) return fold_mod_2pi(x);
      return x - 2.0 * kPi * branch[static_cast<size_t>(idx)];
    };
    for (int a = 0; a < m1; ++a) {
      Complex dummy;
      const Complex r = bare1(static_cast<size_t>(a), false, dummy);
      f(p) = angle(p, r.imag());
      ++p;
    }
    for (int j = 0; j < m3; ++j) {
      const size_t top_c = static_cast<size_t>(m1 + 3 * j);
      const size_t mid_c = top_c + 1;
      const size_t bot_c = top_c + 2;
      Complex sing_top, sing_mid, sing_bot;
      const Complex rt = bare1(top_c, false, sing_top);
      const Complex rm = bare1(mid_c, true, sing_mid);
      const Complex rb = bare1(bot_c, true, sing_bot);
      const Complex top_total = rt + sing_top;
      f(p++) = top_total.real();
      f(p) = angle(p, top_total.imag());
      ++p;
      // sum over the three constituents with the singular pairs dropped;
      // they cancel pairwise up to multiples of 2 pi
      const Complex total = rt + rm + rb;
      f(p) = angle(p, total.imag());
      ++p;
    }
    for (int b = 0; b < m2; ++b) {
      const Complex z = Complex(s.eta[static_cast<size_t>(b)], 0.0);
      Complex r = 0.0;
      for (int k = 0; k < m2; ++k) {
        if (k == b) continue;
        const Complex d = z - s.eta[static_cast<size_t>(k)];
        r += std::log((d + 3.0 * kI) / (d - 3.0 * kI));
      }
      for (const auto& c : level1) {
        const Complex d = z - c.z;
        r -= std::log((d + 1.5 * kI) / (d - 1.5 * kI));
      }
      f(p) = angle(p, r.imag());
      ++p;
    }
  }

  // Analytic Jacobian. Every residual component is the real or imaginary
  // part of a function holomorphic in each constituent position, so the
  // chain rule runs through complex gradients; w-columns also carry the
  // explicit substituted-singular terms.
  void jacobian(const DeviationState& s, Eigen::MatrixXd& jac) const {
    const int m1 = static_cast<int>(s.xi.size());
    const int m3 = static_cast<int>(s.m.size());
    const int m2 = static_cast<int>(s.eta.size());
    const int c1 = m1 + 3 * m3;  // level-1 constituents
    const int n = s.size();
    const double len = chain_length;

    std::vector<Complex> devs(static_cast<size_t>(m3));
    std::vector<Complex> zs(static_cast<size_t>(c1));
    std::vector<int> kind(static_cast<size_t>(c1)), sidx(static_cast<size_t>(c1), -1);
    for (int a = 0; a < m1; ++a) {
      zs[static_cast<size_t>(a)] = Complex(s.xi[static_cast<size_t>(a)], 0.0);
      kind[static_cast<size_t>(a)] = 0;
    }
    for (int j = 0; j < m3; ++j) {
      devs[static_cast<size_t>(j)] = std::exp(s.w[static_cast<size_t>(j)]);
      const Complex t = Complex(s.m[static_cast<size_t>(j)], 1.0) + devs[static_cast<size_t>(j)];
      const int base = m1 + 3 * j;
      zs[static_cast<size_t>(base)] = t;
      zs[static_cast<size_t>(base + 1)] = Complex(s.m[static_cast<size_t>(j)], 0.0);
      zs[static_cast<size_t>(base + 2)] = std::conj(t);
      kind[static_cast<size_t>(base)] = 1;
      kind[static_cast<size_t>(base + 1)] = 2;
      kind[static_cast<size_t>(base + 2)] = 3;
      sidx[static_cast<size_t>(base)] = sidx[static_cast<size_t>(base + 1)] =
          sidx[static_cast<size_t>(base + 2)] = j;
    }

    // complex sensitivity of each constituent to each real variable
    // (variable order matches pack(): xi, per-string (m, Re w, Im w), eta)
    auto var_of_constituent = [&](int c) {
      struct Sens {
        int var;
        Complex factor;
      };
      std::vector<Sens> out;
      if (kind[static_cast<size_t>(c)] == 0) {
        out.push_back({c, Complex(1.0, 0.0)});
        return out;
      }
      const int j = sidx[static_cast<size_t>(c)];
      const int base = m1 + 3 * j;
      const Complex dev = devs[static_cast<size_t>(j)];
      if (kind[static_cast<size_t>(c)] == 1)
        out = {{base, Complex(1.0, 0.0)}, {base + 1, dev}, {base + 2, Complex(0, 1) * dev}};
      else if (kind[static_cast<size_t>(c)] == 2)
        out = {{base, Complex(1.0, 0.0)}};
      else
        out = {{base, Complex(1.0, 0.0)},
               {base + 1, std::conj(dev)},
               {base + 2, std::conj(Complex(0, 1) * dev)}};
      return out;
    };

    auto pair_g = [](Complex d, Complex shift) {
      return 1.0 / (d + shift) - 1.0 / (d - shift);
    };

    // complex gradient of the level-1 bare equation owned by c0 over all
    // constituents (index < c1) and level-2 roots (index c1 + b); singular
    // same-string pairs are skipped (their substitution is added separately)
    std::vector<Complex> grad(static_cast<size_t>(c1 + m2));
    auto level1_gradient = [&](int c0) {
      std::fill(grad.begin(), grad.end(), Complex(0.0, 0.0));
      const Complex z = zs[static_cast<size_t>(c0)];
      grad[static_cast<size_t>(c0)] += len * pair_g(z, 0.5 * kI);
      for (int c = 0; c < c1; ++c) {
        if (c == c0) continue;
        const bool same = sidx[static_cast<size_t>(c0)] >= 0 &&
                          sidx[static_cast<size_t>(c)] == sidx[static_cast<size_t>(c0)];
        const bool singular =
            same && ((kind[static_cast<size_t>(c0)] == 1 && kind[static_cast<size_t>(c)] == 2) ||
                     (kind[static_cast<size_t>(c0)] == 2 && kind[static_cast<size_t>(c)] == 1) ||
                     (kind[static_cast<size_t>(c0)] == 2 && kind[static_cast<size_t>(c)] == 3) ||
                     (kind[static_cast<size_t>(c0)] == 3 && kind[static_cast<size_t>(c)] == 2));
        if (singular) continue;
        const Complex g = pair_g(z - zs[static_cast<size_t>(c)], kI);
        grad[static_cast<size_t>(c0)] -= g;
        grad[static_cast<size_t>(c)] += g;
      }
      for (int b = 0; b < m2; ++b) {
        const Complex h = pair_g(z - s.eta[static_cast<size_t>(b)], -1.5 * kI);
        grad[static_cast<size_t>(c0)] -= h;
        grad[static_cast<size_t>(c1 + b)] += h;
      }
    };

    auto scatter_row = [&](int row, bool imag_part, double scale = 1.0) {
      for (int c = 0; c < c1; ++c) {
        const Complex g = grad[static_cast<size_t>(c)];
        if (g == Complex(0.0, 0.0)) continue;
        for (const auto& sens : var_of_constituent(c)) {
          const Complex d = g * sens.factor;
          jac(row, sens.var) += scale * (imag_part ? d.imag() : d.real());
        }
      }
      for (int b = 0; b < m2; ++b) {
        const Complex d = grad[static_cast<size_t>(c1 + b)];
        jac(row, m1 + 3 * m3 + b) += scale * (imag_part ? d.imag() : d.real());
      }
    };

    jac.setZero(n, n);
    for (int a = 0; a < m1; ++a) {
      level1_gradient(a);
      scatter_row(a, true);
    }
    for (int j = 0; j < m3; ++j) {
      const int base = m1 + 3 * j;
      const int row_re = base, row_im = base + 1, row_sum = base + 2;
      const Complex dev = devs[static_cast<size_t>(j)];
      // top equation: regular gradient plus the substituted singular term
      level1_gradient(base);
      scatter_row(row_re, false);
      scatter_row(row_im, true);
      // S = -Log(2i + dev) + w
      const Complex dS_dRew = -dev / (2.0 * kI + dev) + 1.0;
      const Complex dS_dImw = kI * dS_dRew;
      jac(row_re, base + 1) += dS_dRew.real();
      jac(row_im, base + 1) += dS_dRew.imag();
      jac(row_re, base + 2) += dS_dImw.real();
      jac(row_im, base + 2) += dS_dImw.imag();
      // sum equation: the three constituents' regular gradients
      for (int c : {base, base + 1, base + 2}) {
        level1_gradient(c);
        scatter_row(row_sum, true);
      }
    }
    for (int b = 0; b < m2; ++b) {
      std::fill(grad.begin(), grad.end(), Complex(0.0, 0.0));
      const Complex z = Complex(s.eta[static_cast<size_t>(b)], 0.0);
      for (int k = 0; k < m2; ++k) {
        if (k == b) continue;
        const Complex g = pair_g(z - s.eta[static_cast<size_t>(k)], 3.0 * kI);
        grad[static_cast<size_t>(c1 + b)] += g;
        grad[static_cast<size_t>(c1 + k)] -= g;
      }
      for (int c = 0; c < c1; ++c) {
        const Complex h = pair_g(z - zs[static_cast<size_t>(c)], 1.5 * kI);
        grad[static_cast<size_t>(c1 + b)] -= h;
        grad[static_cast<size_t>(c)] += h;
      }
      scatter_row(m1 + 3 * m3 + b, true);
    }
  }

  // pin the logarithm branches of the angle components at the seed
  void freeze(const DeviationState& seed) {
    branch.assign(static_cast<size_t>(seed.size()), 0.0);
    Eigen::VectorXd g;
    residual(seed, g);  // zero branches: raw values, no folding
    const int m1 = static_cast<int>(seed.xi.size());
    const int m3 = static_cast<int>(seed.m.size());
    for (int p = 0; p < seed.size(); ++p) {
      const bool is_top_re = p >= m1 && p < m1 + 3 * m3 && (p - m1) % 3 == 0;
      branch[static_cast<size_t>(p)] =
          is_top_re ? 0.0 : std::round(g(p) / (2.0 * kPi));
    }
  }
};

// Damped Newton with the analytic Jacobian. The folded residual steers the
// early phase; once the iterate settles the branches are frozen so the
// quantum numbers cannot drift while polishing.
DeviationState solve_deviation_system(int chain_length, DeviationState state, double tol,
                                      int max_iterations) {
  DeviationSystem sys{chain_length, {}};
  const int n = state.size();
  Eigen::VectorXd x(n), f(n), fnew(n), xt(n);
  state.pack(x);
  sys.residual(state, f);
  double merit = f.squaredNorm();
  Eigen::MatrixXd jac(n, n);

  const bool trace = std::getenv("G2V_TRACE") != nullptr;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (trace)
      std::fprintf(stderr, "[dev L=%d iter=%d] res=%.3e frozen=%d\n", chain_length, iter,
                   f.lpNorm<Eigen::Infinity>(), static_cast<int>(!sys.branch.empty()));
    if (f.lpNorm<Eigen::Infinity>() < tol) break;
    if (sys.branch.empty() && f.lpNorm<Eigen::Infinity>() < 0.3) {
      // iterate has settled near a state; pin its logarithm branches
      state.unpack(x);
      sys.freeze(state);
      sys.residual(state, f);
      merit = f.squaredNorm();
    }
    state.unpack(x);
    sys.jacobian(state, jac);
    Eigen::VectorXd step = jac.partialPivLu().solve(-f);
    const double span = step.lpNorm<Eigen::Infinity>();
    if (span > 2.0) step *= 2.0 / span;
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= 24; ++h) {
      xt = x + alpha * step;
      state.unpack(xt);
      sys.residual(state, fnew);
      if (fnew.squaredNorm() < merit) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      state.unpack(x);
      std::vector<Complex> last;
      std::ostringstream msg;
      msg << "deviation-system Newton stalled at residual " << f.lpNorm<Eigen::Infinity>()
          << " (L=" << chain_length << ")";
      throw NewtonDivergence(msg.str(), std::move(last));
    }
    x = xt;
    f = fnew;
    merit = f.squaredNorm();
  }
  state.unpack(x);
  if (f.lpNorm<Eigen::Infinity>() > tol) {
    std::ostringstream msg;
    msg << "deviation-system Newton did not reach tolerance: residual "
        << f.lpNorm<Eigen::Infinity>();
    throw NewtonDivergence(msg.str(), {});
  }
  return state;
}

// Seed the deviation solver from a string solution alone: positions come
// from the string rapidities; each log-deviation starts from the balance of
// its top equation, w = Log(2i) - (regular part), then two fixed-point
// passes refine it before Newton takes over.
DeviationState self_seed_deviation(int chain_length, const StringState& s) {
  DeviationState state;
  state.xi = s.xi1;
  state.m = s.xi3;
  state.eta = s.xi2;
  std::sort(state.xi.begin(), state.xi.end());
  std::sort(state.m.begin(), state.m.end());
  std::sort(state.eta.begin(), state.eta.end());
  state.w.assign(state.m.size(), std::log(Complex(0.0, 0.05)));

  DeviationSystem sys{chain_length, {}};
  Eigen::VectorXd f;
  const int m1 = static_cast<int>(state.xi.size());
  for (int pass = 0; pass < 4; ++pass) {
    sys.residual(state, f);
    for (size_t j = 0; j < state.m.size(); ++j) {
      const int p = m1 + 3 * static_cast<int>(j);
      state.w[j] -= Complex(f(p), f(p + 1));
      if (state.w[j].real() > -0.5) state.w[j].real(-0.5);  // deviations stay small
    }
  }
  return state;
}

double interp_by_fraction(const std::vector<double>& values, double t) {
  if (values.empty()) return 0.0;
  const size_t n = values.size();
  if (n == 1) return values[0];
  const double pos = t * static_cast<double>(n) - 0.5;
  if (pos <= 0.0) return values.front();
  if (pos >= static_cast<double>(n - 1)) return values.back();
  const size_t lo = static_cast<size_t>(pos);
  const double u = pos - static_cast<double>(lo);
  return (1.0 - u) * values[lo] + u * values[lo + 1];
}

// positions from the target string solution plus the previous size's
// string-to-raw shifts; log-deviations carried over by index fraction with
// their real parts rescaled by the size ratio (inner deviations shrink as
// exp(-c L), so Re w grows linearly in L at fixed index fraction)
DeviationState continue_deviation(int target_length, int prev_length,
                                  const StringState& target, const StringState& prev_string,
                                  const DeviationState& prev) {
  DeviationState s;
  s.xi = target.xi1;
  s.m = target.xi3;
  s.eta = target.xi2;
  std::sort(s.xi.begin(), s.xi.end());
  std::sort(s.m.begin(), s.m.end());
  std::sort(s.eta.begin(), s.eta.end());

  auto shift_profile = [](std::vector<double> raw, std::vector<double> str) {
    std::sort(raw.begin(), raw.end());
    std::sort(str.begin(), str.end());
    std::vector<double> shifts(raw.size(), 0.0);
    for (size_t i = 0; i < raw.size() && i < str.size(); ++i) shifts[i] = raw[i] - str[i];
    return shifts;
  };
  auto apply_shift = [](std::vector<double>& target_positions,
                        const std::vector<double>& shifts) {
    const size_t count = target_positions.size();
    for (size_t j = 0; j < count; ++j) {
      const double t = (j + 0.5) / static_cast<double>(count);
      target_positions[j] += interp_by_fraction(shifts, t);
    }
  };
  apply_shift(s.xi, shift_profile(prev.xi, prev_string.xi1));
  apply_shift(s.m, shift_profile(prev.m, prev_string.xi3));
  apply_shift(s.eta, shift_profile(prev.eta, prev_string.xi2));

  std::vector<double> wr, wi;
  for (const Complex& w : prev.w) {
    wr.push_back(w.real());
    wi.push_back(w.imag());
  }
  const double scale = static_cast<double>(target_length) / prev_length;
  const size_t count = s.m.size();
  s.w.resize(count);
  for (size_t j = 0; j < count; ++j) {
    const double t = (j + 0.5) / static_cast<double>(count);
    s.w[j] = Complex(scale * interp_by_fraction(wr, t), interp_by_fraction(wi, t));
  }
  return s;
}

void trace_log(const std::string& msg) {
  if (std::getenv("G2V_TRACE")) std::fprintf(stderr, "[bethe] %s\n", msg.c_str());
}

void validate_deviation_solution(const DeviationState& s, const StringState& reference) {
  for (const Complex& w : s.w)
    if (!(w.real() < -0.7))
      throw std::runtime_error("three-string deviation left the string regime");
  // positions must stay close to the string rapidities; a slot hop to a
  // neighboring state shifts a root by a whole level spacing
  auto max_shift = [](std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() != b.size()) return 1e30;
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
  };
  const double drift = std::max({max_shift(s.xi, reference.xi1),
                                 max_shift(s.m, reference.xi3),
                                 max_shift(s.eta, reference.xi2)});
  if (drift > 2.0) {
    trace_log("drift " + std::to_string(drift));
    throw std::runtime_error("converged state drifted from the seeded configuration");
  }
  // the seeded configurations here are reflection symmetric with distinct roots
  auto check_symmetric = [](std::vector<double> v, const char* what) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
      if (std::abs(v[i] + v[n - 1 - i]) > 0.05)
        throw std::runtime_error(std::string(what) + " lost reflection symmetry");
      if (i + 1 < n && v[i + 1] - v[i] < 1e-6)
        throw std::runtime_error(std::string(what) + " roots collided");
    }
  };
  check_symmetric(s.xi, "level-1 one-strings");
  check_symmetric(s.m, "three-string centers");
  check_symmetric(s.eta, "level-2 roots");
}

using QnBuilder = QuantumNumbers (*)(int);

struct LadderCaches {
  std::map<int, BetheState> bethe;
  std::map<int, DeviationState> deviation;
  std::map<int, std::string> failed;  // ladder rungs known not to converge
};

// two fixed-point passes aligning each w with its top equation, given the
// seeded positions
void refine_w(int chain_length, DeviationState& state) {
  DeviationSystem sys{chain_length, {}};
  Eigen::VectorXd f;
  const int m1 = static_cast<int>(state.xi.size());
  for (int pass = 0; pass < 2; ++pass) {
    sys.residual(state, f);
    for (size_t j = 0; j < state.m.size(); ++j) {
      const int p = m1 + 3 * static_cast<int>(j);
      state.w[j] -= Complex(f(p), f(p + 1));
      if (state.w[j].real() > -0.5) state.w[j].real(-0.5);
    }
  }
}

DeviationState solve_deviation_ladder(int chain_length, QnBuilder quantum_numbers,
                                      bool approaches_from_below, LadderCaches& caches) {
  const auto it = caches.deviation.find(chain_length);
  if (it != caches.deviation.end()) return it->second;
  const auto failed_it = caches.failed.find(chain_length);
  if (failed_it != caches.failed.end())
    throw NewtonDivergence("deviation ladder failed earlier: " + failed_it->second, {});

  const StringState s = solve_string_system(chain_length, quantum_numbers(chain_length));

  // the per-site energy approaches the bulk value monotonically (from below
  // for the ground family, from above for the excitation); this rejects
  // converged-but-neighboring states the structural checks miss
  const double e_bulk = -0.30987586835110368;  // closed-form bulk energy density
  auto energy_of = [](const DeviationState& d, int len) {
    return energy_from_roots(d.to_bethe(0.0), len) / len;
  };

  std::vector<std::function<DeviationState()>> seeds;
  for (int back : {4, 8}) {
    if (chain_length - back < 8) continue;
    seeds.emplace_back([&, back]() {
      const DeviationState prev =
          solve_deviation_ladder(chain_length - back, quantum_numbers, approaches_from_below,
                                 caches);
      const StringState prev_string =
          solve_string_system(chain_length - back, quantum_numbers(chain_length - back));
      DeviationState seed =
          continue_deviation(chain_length, chain_length - back, s, prev_string, prev);
      refine_w(chain_length, seed);
      return seed;
    });
  }
  seeds.emplace_back([&]() { return self_seed_deviation(chain_length, s); });

  std::string last_error = "no seed applicable";
  for (const auto& make_seed : seeds) {
    try {
      DeviationState solved =
          solve_deviation_system(chain_length, make_seed(), 1e-11, 300);
      validate_deviation_solution(solved, s);
      const double e_site = energy_of(solved, chain_length);
      if (approaches_from_below ? !(e_site < e_bulk) : !(e_site > e_bulk))
        throw std::runtime_error("per-site energy on the wrong side of the bulk value");
      const auto prev_it = caches.deviation.find(chain_length - 4);
      if (prev_it != caches.deviation.end()) {
        const double e_prev = energy_of(prev_it->second, chain_length - 4);
        const bool monotone = approaches_from_below ? (e_site > e_prev) : (e_site < e_prev);
        if (!monotone)
          throw std::runtime_error("per-site energy sequence lost monotonicity");
      }
      caches.deviation[chain_length] = solved;
      return solved;
    } catch (const std::exception& e) {
      last_error = e.what();
      trace_log("L=" + std::to_string(chain_length) + " seed attempt failed: " + last_error);
    }
  }
  caches.failed[chain_length] = last_error;
  throw NewtonDivergence("deviation ladder failed: " + last_error, {});
}

BetheState solve_state_roots(int chain_length, QnBuilder quantum_numbers, RootCount counts,
                             bool approaches_from_below, LadderCaches& caches) {
  const auto it = caches.bethe.find(chain_length);
  if (it != caches.bethe.end()) return it->second;

  std::string last_error;

  // string-resolved coordinates carry the exponentially narrow three-strings
  // past the double-precision wall of the raw variables
  if (chain_length % 4 == 0 && chain_length >= 8) {
    try {
      DeviationState solved =
          solve_deviation_ladder(chain_length, quantum_numbers, approaches_from_below, caches);
      BetheState out;
      {
        Eigen::VectorXd f;
        DeviationSystem sys{chain_length, {}};
        sys.residual(solved, f);
        out = solved.to_bethe(f.lpNorm<Eigen::Infinity>());
      }
      if (static_cast<int>(out.roots1.size()) != counts.n1 ||
          static_cast<int>(out.roots2.size()) != counts.n2)
        throw std::logic_error("deviation solve produced wrong root counts");
      caches.bethe[chain_length] = out;
      return out;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }

  if (chain_length <= 32) {
    const StringState s = solve_string_system(chain_length, quantum_numbers(chain_length));
    for (double dev : {2.0 / chain_length, 0.1, 0.2, 0.3, 0.05, 0.4}) {
      try {
        BetheState seed = reconstruct_from_strings(s, dev);
        split_origin_collision(seed, 0.5 * dev);
        BetheState solved = solve_raw_bethe(chain_length, counts, seed);
        caches.bethe[chain_length] = solved;
        return solved;
      } catch (const std::exception& e) {
        last_error += std::string("; ") + e.what();
      }
    }
  }
  throw NewtonDivergence("all seeds failed: " + last_error, {});
}

}  // namespace

namespace {

LadderCaches& ground_caches() {
  static LadderCaches caches;
  return caches;
}

}  // namespace

BetheState ground_state_roots(int chain_length) {
  return solve_state_roots(chain_length, &ground_quantum_numbers,
                           RootCount{2 * chain_length, chain_length}, true, ground_caches());
}

BetheState excited_state_roots(int chain_length) {
  if (chain_length % 4 != 0 || chain_length < 8)
    throw std::invalid_argument("the excitation ladder runs over L = 8, 12, ... (mod 4)");
  static std::map<int, DeviationState> cache;
  auto finish = [chain_length](const DeviationState& d) {
    Eigen::VectorXd f;
    DeviationSystem sys{chain_length, {}};
    sys.residual(d, f);
    return d.to_bethe(f.lpNorm<Eigen::Infinity>());
  };
  const auto it = cache.find(chain_length);
  if (it != cache.end()) return finish(it->second);

  // hole surgery on the ground configuration: drop the most negative
  // three-string and the two most negative level-2 roots, then relax;
  // the mirrored surgery gives the opposite-momentum partner
  ground_state_roots(chain_length);  // ensures the deviation ladder is populated
  DeviationState seed = ground_caches().deviation.at(chain_length);
  seed.m.erase(seed.m.begin());
  seed.w.erase(seed.w.begin());
  seed.eta.erase(seed.eta.begin(), seed.eta.begin() + 2);

  const DeviationState seed_copy = seed;
  DeviationState solved = solve_deviation_system(chain_length, seed, 1e-11, 300);
  for (const Complex& w : solved.w)
    if (!(w.real() < -0.7))
      throw std::runtime_error("excited three-string deviation left the string regime");
  auto drift = [](const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
      worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
  };
  if (drift(solved.xi, seed_copy.xi) > 1.0 || drift(solved.m, seed_copy.m) > 1.0 ||
      drift(solved.eta, seed_copy.eta) > 1.0)
    throw std::runtime_error("excitation drifted from the surgery seed");
  const double e_site = energy_from_roots(solved.to_bethe(0.0), chain_length) / chain_length;
  if (!(e_site > -0.30987586835110368))
    throw std::runtime_error("excitation energy fell below the bulk value");
  const auto prev = cache.find(chain_length - 4);
  if (prev != cache.end()) {
    const double e_prev =
        energy_from_roots(prev->second.to_bethe(0.0), chain_length - 4) / (chain_length - 4);
    if (!(e_site < e_prev))
      throw std::runtime_error("excitation energy sequence lost monotonicity");
  }
  cache[chain_length] = solved;
  return finish(solved);
}

StringPattern classify_level1(const BetheState& state, double real_tol) {
  StringPattern out;
  std::vector<Complex> pending(state.roots1);
  // group by center: match each top with its nearest conjugate partner and
  // the nearest unused near-real root
  std::vector<bool> used(pending.size(), false);
  for (size_t i = 0; i < pending.size(); ++i) {
    if (used[i] || pending[i].imag() <= real_tol) continue;
    size_t partner = pending.size();
    double best_partner = 0.3;
    for (size_t j = 0; j < pending.size(); ++j) {
      if (used[j] || j == i) continue;
      const double d = std::abs(pending[j] - std::conj(pending[i]));
      if (d < best_partner) {
        best_partner = d;
        partner = j;
      }
    }
    size_t center = pending.size();
    double best = 1e30;
    for (size_t j = 0; j < pending.size(); ++j) {
      if (used[j] || j == i || j == partner) continue;
      if (std::abs(pending[j].imag()) > real_tol) continue;
      const double d = std::abs(pending[j].real() - pending[i].real());
      if (d < best) {
        best = d;
        center = j;
      }
    }
    if (partner == pending.size() || center == pending.size()) {
      out.clean = false;
      continue;
    }
    used[i] = used[partner] = used[center] = true;
    out.triplets.push_back({pending[center], pending[i], pending[partner]});
  }
  for (size_t i = 0; i < pending.size(); ++i) {
    if (used[i]) continue;
    if (std::abs(pending[i].imag()) > real_tol) out.clean = false;
    out.reals.push_back(pending[i].real());
  }
  std::sort(out.reals.begin(), out.reals.end());
  std::sort(out.triplets.begin(), out.triplets.end(),
            [](const auto& a, const auto& b) { return a[0].real() < b[0].real(); });
  return out;
}

}  // namespace g2v
