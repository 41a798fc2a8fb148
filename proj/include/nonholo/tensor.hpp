#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace nonholo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Coord = Eigen::VectorXd;

/// Dense rank-R array with per-axis extents, row-major.
template <int Rank>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::array<int, Rank> extents) : extents_(extents) {
    std::size_t n = 1;
    for (int e : extents_) n *= static_cast<std::size_t>(e);
    data_.assign(n, 0.0);
  }

  // Uniform extent on every axis.
  static Tensor uniform(int n) {
    std::array<int, Rank> ext;
    ext.fill(n);
    return Tensor(ext);
  }

  template <class... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  template <class... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  int extent(int axis) const { return extents_[axis]; }
  const std::array<int, Rank>& extents() const { return extents_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  // Max-norm of the entrywise difference; extents must agree.
  friend double max_abs_diff(const Tensor& a, const Tensor& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.data_.size(); ++k) m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
    return m;
  }

 private:
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t off = 0;
    for (int a = 0; a < Rank; ++a) off = off * static_cast<std::size_t>(extents_[a]) + idx[a];
    return off;
  }

  std::array<int, Rank> extents_{};
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace nonholo
