#include "g2vertex/chain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace g2v {

namespace {

struct HColumn {
  // Nonzeros of one column of the local density, (row, value) pairs.
  std::vector<std::pair<int, double>> entries;
};

const std::array<HColumn, 49>& density_columns() {
  static const std::array<HColumn, 49> cols = [] {
    const Mat49& h = local_hamiltonian_density();
    std::array<HColumn, 49> out;
    for (int c = 0; c < 49; ++c)
      for (int r = 0; r < 49; ++r)
        if (std::abs(h(r, c)) > 1e-14) out[c].entries.emplace_back(r, h(r, c));
    return out;
  }();
  return cols;
}

std::vector<std::uint32_t> base7_powers(int length) {
  std::vector<std::uint32_t> p(static_cast<size_t>(length));
  // Site 0 is the slowest digit.
  std::uint32_t v = 1;
  for (int i = length - 1; i >= 0; --i) {
    p[static_cast<size_t>(i)] = v;
    v *= 7;
  }
  return p;
}

}  // namespace

const Mat49& local_hamiltonian_density() {
  static const Mat49 h = [] {
    const Mat49& c = G2Algebra::instance().casimir();
    const Mat49 c2 = c * c;
    return Mat49(37.0 / 48.0 * c + 185.0 / 384.0 * c2 + 25.0 / 512.0 * (c2 * c) -
                 7.0 / 12.0 * Mat49::Identity());
  }();
  return h;
}

bool sector_valid(int chain_length, SectorLabel s) {
  const int len = chain_length;
  if (s.m1 >= 0 && s.m1 <= len) {
    if (s.m2 >= -len && s.m2 <= len - s.m1) return true;
  }
  if (s.m1 <= 0 && s.m1 >= -len) {
    if (s.m2 >= -s.m1 - len && s.m2 <= len) return true;
  }
  return false;
}

std::vector<SectorLabel> all_sectors(int chain_length) {
  std::vector<SectorLabel> out;
  for (int m1 = -chain_length; m1 <= chain_length; ++m1)
    for (int m2 = -chain_length; m2 <= chain_length; ++m2)
      if (sector_valid(chain_length, {m1, m2})) out.push_back({m1, m2});
  return out;
}

std::map<SectorLabel, std::int64_t> sector_dimensions(int chain_length) {
  // Convolve the per-site weight distribution chain_length times.
  std::map<std::pair<int, int>, std::int64_t> dist;
  dist[{0, 0}] = 1;
  for (int site = 0; site < chain_length; ++site) {
    std::map<std::pair<int, int>, std::int64_t> next;
    for (const auto& [w, count] : dist)
      for (int a = 0; a < 7; ++a)
        next[{w.first + kWeight1[a], w.second + kWeight2[a]}] += count;
    dist = std::move(next);
  }
  std::map<SectorLabel, std::int64_t> out;
  for (const auto& [w, count] : dist) out[{w.first, w.second}] = count;
  return out;
}

std::vector<std::uint32_t> sector_basis(int chain_length, SectorLabel sector) {
  if (!sector_valid(chain_length, sector)) {
    std::ostringstream msg;
    msg << "sector (" << sector.m1 << ", " << sector.m2 << ") invalid for L=" << chain_length;
    throw std::invalid_argument(msg.str());
  }
  std::vector<std::uint32_t> keys;
  std::vector<std::uint8_t> digit(static_cast<size_t>(chain_length), 0);
  const auto powers = base7_powers(chain_length);

  // Depth-first scan in lexicographic order with partial-sum bounds; the
  // remaining sites can shift each charge by at most +-(L - depth).
  auto rec = [&](auto&& self, int depth, int w1, int w2, std::uint32_t key) -> void {
    const int remaining = chain_length - depth;
    if (std::abs(sector.m1 - w1) > remaining || std::abs(sector.m2 - w2) > remaining) return;
    if (depth == chain_length) {
      keys.push_back(key);
      return;
    }
    for (int a = 0; a < 7; ++a)
      self(self, depth + 1, w1 + kWeight1[a], w2 + kWeight2[a],
           key + static_cast<std::uint32_t>(a) * powers[static_cast<size_t>(depth)]);
  };
  rec(rec, 0, 0, 0, 0);
  return keys;  // lexicographic scan emits sorted keys
}

RootCount root_counts(int chain_length, SectorLabel sector) {
  const RootCount rc{2 * chain_length - 2 * sector.m1 - sector.m2,
                     chain_length - sector.m1 - sector.m2};
  if (rc.n1 < 0 || rc.n2 < 0) {
    std::ostringstream msg;
    msg << "root counts (" << rc.n1 << ", " << rc.n2 << ") negative for sector ("
        << sector.m1 << ", " << sector.m2 << "), L=" << chain_length;
    throw NegativeCount(msg.str());
  }
  return rc;
}

SectorSpace::SectorSpace(int chain_length, SectorLabel sector)
    : length_(chain_length), sector_(sector), keys_(sector_basis(chain_length, sector)),
      powers_(base7_powers(chain_length)) {
  if (keys_.empty()) {
    std::ostringstream msg;
    msg << "sector (" << sector.m1 << ", " << sector.m2 << ") empty for L=" << chain_length;
    throw EmptySector(msg.str());
  }
  digits_.resize(keys_.size() * static_cast<size_t>(length_));
  for (size_t s = 0; s < keys_.size(); ++s) {
    std::uint32_t k = keys_[s];
    for (int i = length_ - 1; i >= 0; --i) {
      digits_[s * static_cast<size_t>(length_) + static_cast<size_t>(i)] =
          static_cast<std::uint8_t>(k % 7);
      k /= 7;
    }
  }
}

std::int64_t SectorSpace::index_of(std::uint32_t key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return it - keys_.begin();
}

void SectorSpace::build_action() const {
  const auto& cols = density_columns();
  const size_t n = keys_.size();
  const int len = length_;
  row_start_.assign(n + 1, 0);
  col_index_.clear();
  weight_.clear();
  std::vector<std::pair<std::int32_t, double>> row;
  for (size_t s = 0; s < n; ++s) {
    const std::uint8_t* d = &digits_[s * static_cast<size_t>(len)];
    const std::uint32_t key = keys_[s];
    row.clear();
    for (int bond = 0; bond < len; ++bond) {
      const int site2 = (bond + 1 == len) ? 0 : bond + 1;
      const int a = d[bond], b = d[site2];
      for (const auto& [r, value] : cols[static_cast<size_t>(7 * a + b)].entries) {
        const int ap = r / 7, bp = r % 7;
        const std::uint32_t target =
            key + static_cast<std::uint32_t>(ap - a) * powers_[static_cast<size_t>(bond)] +
            static_cast<std::uint32_t>(bp - b) * powers_[static_cast<size_t>(site2)];
        // Weight conservation of the density keeps targets inside the sector.
        row.emplace_back(static_cast<std::int32_t>(index_of(target)), value);
      }
    }
    std::sort(row.begin(), row.end(),
              [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    for (size_t i = 0; i < row.size();) {
      double acc = row[i].second;
      size_t j = i + 1;
      while (j < row.size() && row[j].first == row[i].first) acc += row[j++].second;
      col_index_.push_back(row[i].first);
      weight_.push_back(acc);
      i = j;
    }
    row_start_[s + 1] = static_cast<std::int64_t>(col_index_.size());
  }
}

void SectorSpace::apply_hamiltonian(const double* x, double* y) const {
  if (row_start_.empty()) build_action();
  const size_t n = keys_.size();
  for (size_t s = 0; s < n; ++s) {
    double acc = 0.0;
    for (std::int64_t e = row_start_[s]; e < row_start_[s + 1]; ++e)
      acc += weight_[static_cast<size_t>(e)] * x[col_index_[static_cast<size_t>(e)]];
    y[s] = acc;
  }
}

void SectorSpace::apply_translation(const double* x, double* y) const {
  const size_t n = keys_.size();
  const int len = length_;
  for (size_t s = 0; s < n; ++s) {
    const std::uint8_t* d = &digits_[s * static_cast<size_t>(len)];
    // Site i of the image holds digit i+1 of the source (cyclic left shift).
    std::uint32_t target = 0;
    for (int i = 0; i < len; ++i) {
      const int src = (i + 1 == len) ? 0 : i + 1;
      target += static_cast<std::uint32_t>(d[src]) * powers_[static_cast<size_t>(i)];
    }
    y[index_of(target)] = x[s];
  }
}

Eigen::MatrixXd SectorSpace::dense_hamiltonian() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n), y(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    x(c) = 1.0;
    apply_hamiltonian(x.data(), y.data());
    m.col(c) = y;
    x(c) = 0.0;
  }
  return m;
}

Eigen::MatrixXd SectorSpace::dense_translation() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n), y(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    x(c) = 1.0;
    apply_translation(x.data(), y.data());
    m.col(c) = y;
    x(c) = 0.0;
  }
  return m;
}

namespace {

std::int64_t int_pow7(int n) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 7;
  return v;
}

}  // namespace

Eigen::MatrixXd dense_hamiltonian(int chain_length) {
  const auto dim = static_cast<Eigen::Index>(int_pow7(chain_length));
  const Mat49& h = local_hamiltonian_density();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  const auto powers = base7_powers(chain_length);
  for (int bond = 0; bond < chain_length; ++bond) {
    const int site2 = (bond + 1 == chain_length) ? 0 : bond + 1;
    const std::int64_t p1 = powers[static_cast<size_t>(bond)];
    const std::int64_t p2 = powers[static_cast<size_t>(site2)];
    for (std::int64_t s = 0; s < dim; ++s) {
      const int a = static_cast<int>((s / p1) % 7);
      const int b = static_cast<int>((s / p2) % 7);
      for (int ap = 0; ap < 7; ++ap)
        for (int bp = 0; bp < 7; ++bp) {
          const double v = h(7 * ap + bp, 7 * a + b);
          if (v == 0.0) continue;
          out(s + (ap - a) * p1 + (bp - b) * p2, s) += v;
        }
    }
  }
  return out;
}

Eigen::MatrixXd dense_translation(int chain_length) {
  const auto dim = static_cast<Eigen::Index>(int_pow7(chain_length));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  const auto powers = base7_powers(chain_length);
  for (std::int64_t s = 0; s < dim; ++s) {
    std::int64_t target = 0;
    for (int i = 0; i < chain_length; ++i) {
      const int src = (i + 1 == chain_length) ? 0 : i + 1;
      const int digit = static_cast<int>((s / powers[static_cast<size_t>(src)]) % 7);
      target += digit * powers[static_cast<size_t>(i)];
    }
    out(target, s) = 1.0;
  }
  return out;
}

Eigen::VectorXd charge_diagonal(int chain_length, int which) {
  const auto dim = static_cast<Eigen::Index>(int_pow7(chain_length));
  const int* w = (which == 1) ? kWeight1 : kWeight2;
  Eigen::VectorXd out(dim);
  for (std::int64_t s = 0; s < dim; ++s) {
    std::int64_t k = s;
    int sum = 0;
    for (int i = 0; i < chain_length; ++i) {
      sum += w[k % 7];
      k /= 7;
    }
    out(s) = sum;
  }
  return out;
}

Eigen::VectorXd spin3_diagonal(int chain_length) {
  return 3.0 * charge_diagonal(chain_length, 1) + 2.0 * charge_diagonal(chain_length, 2);
}

}  // namespace g2v
