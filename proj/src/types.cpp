#include "g2vertex/types.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace g2v {

Mat49 kron(const Mat7& a, const Mat7& b) {
  Mat49 out;
  for (int i1 = 0; i1 < 7; ++i1)
    for (int j1 = 0; j1 < 7; ++j1)
      out.block<7, 7>(7 * i1, 7 * j1) = a(i1, j1) * b;
  return out;
}

const Mat49& swap_operator() {
  static const Mat49 p = [] {
    Mat49 m = Mat49::Zero();
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) m(7 * i + j, 7 * j + i) = 1.0;
    return m;
  }();
  return p;
}

double max_abs(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void write_matrix(std::ostream& os, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> rows >> cols)) throw std::runtime_error("matrix dump: bad header");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(is >> m(i, j))) throw std::runtime_error("matrix dump: truncated data");
  return m;
}

}  // namespace g2v
