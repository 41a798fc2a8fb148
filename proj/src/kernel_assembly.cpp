#include "nonholo/kernel_assembly.hpp"

#include <vector>

#include "nonholo/errors.hpp"

namespace nonholo {

void assemble_rows(Mat& kernel, const RowFiller& fill, Execution exec) {
  const int rows = static_cast<int>(kernel.rows());
  const int cols = static_cast<int>(kernel.cols());
  if (exec == Execution::Serial) {
    std::vector<double> buf(static_cast<std::size_t>(cols));
    for (int a = 0; a < rows; ++a) {
      fill(a, buf.data());
      kernel.row(a) = Eigen::Map<const Eigen::RowVectorXd>(buf.data(), cols);
    }
    return;
  }
#pragma omp parallel
  {
    std::vector<double> buf(static_cast<std::size_t>(cols));
#pragma omp for schedule(dynamic, 1)
    for (int a = 0; a < rows; ++a) {
      fill(a, buf.data());
      kernel.row(a) = Eigen::Map<const Eigen::RowVectorXd>(buf.data(), cols);
    }
  }
}

Vec apply_dense(const Mat& kernel, const Vec& v, Execution exec) {
  if (kernel.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "kernel and vector sizes differ");
  const int rows = static_cast<int>(kernel.rows());
  const int cols = static_cast<int>(kernel.cols());
  Vec y(rows);
  auto row_dot = [&](int a) {
    double s = 0;
    for (int b = 0; b < cols; ++b) s += kernel(a, b) * v[b];
    y[a] = s;
  };
  if (exec == Execution::Serial) {
    for (int a = 0; a < rows; ++a) row_dot(a);
  } else {
#pragma omp parallel for schedule(static)
    for (int a = 0; a < rows; ++a) row_dot(a);
  }
  return y;
}

Vec apply_azimuthal(const Mat& rows, int n_theta, int n_phi, const Vec& v, Execution exec) {
  const int n = n_theta * n_phi;
  if (rows.rows() != n_theta || rows.cols() != n || v.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "azimuthal kernel and vector sizes differ");
  Vec y(n);
  // Row (j, k) is row (j, 0) shifted by k in longitude:
  //   K[(j,k)][(j',k')] = rows(j, j' n_phi + (k' - k mod n_phi))
  auto one = [&](int idx) {
    const int j = idx / n_phi;
    const int k = idx % n_phi;
    double s = 0;
    for (int jp = 0; jp < n_theta; ++jp) {
      const int base = jp * n_phi;
      for (int kp = 0; kp < n_phi; ++kp) {
        int d = kp - k;
        if (d < 0) d += n_phi;
        s += rows(j, base + d) * v[base + kp];
      }
    }
    y[idx] = s;
  };
  if (exec == Execution::Serial) {
    for (int idx = 0; idx < n; ++idx) one(idx);
  } else {
#pragma omp parallel for schedule(static)
    for (int idx = 0; idx < n; ++idx) one(idx);
  }
  return y;
}

}  // namespace nonholo
