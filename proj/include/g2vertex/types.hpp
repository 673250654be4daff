#ifndef G2VERTEX_TYPES_HPP
#define G2VERTEX_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <vector>

namespace g2v {

using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat49 = Eigen::Matrix<double, 49, 49>;
using Mat49c = Eigen::Matrix<std::complex<double>, 49, 49>;
using Complex = std::complex<double>;

constexpr int kSiteDim = 7;
constexpr int kPairDim = 49;

/// Kronecker product with the site-1 index as the slow index:
/// (A (x) B)[7*i1+i2, 7*j1+j2] = A[i1,j1] * B[i2,j2].
Mat49 kron(const Mat7& a, const Mat7& b);

/// The 49x49 two-site permutation operator.
const Mat49& swap_operator();

/// Max-abs entry, used to normalize residuals of operator identities.
double max_abs(const Eigen::Ref<const Eigen::MatrixXd>& m);
double max_abs(const Eigen::Ref<const Eigen::MatrixXcd>& m);

/// Plain-text matrix dump: row-major, one row per line, 17 significant digits.
void write_matrix(std::ostream& os, const Eigen::Ref<const Eigen::MatrixXd>& m);
Eigen::MatrixXd read_matrix(std::istream& is);

}  // namespace g2v

#endif
