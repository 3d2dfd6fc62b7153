#include "courant/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "courant/error.hpp"

namespace courant {

namespace {

void require_nodes(int N) {
  require(N >= 1, ErrorCode::invalid_argument, "edge quadrature needs at least 2 nodes");
}

constexpr double kSbp42Norm[4] = {17.0 / 48, 59.0 / 48, 43.0 / 48, 49.0 / 48};

// Boundary block of the 4/2 operator (Mattsson-Nordstrom), times h.
const std::vector<std::vector<double>>& sbp42_boundary_rows() {
  static const std::vector<std::vector<double>> rows = {
      {-24.0 / 17, 59.0 / 34, -4.0 / 17, -3.0 / 34},
      {-1.0 / 2, 0.0, 1.0 / 2},
      {4.0 / 43, -59.0 / 86, 0.0, 59.0 / 86, -4.0 / 43},
      {3.0 / 98, 0.0, -59.0 / 98, 0.0, 32.0 / 49, -4.0 / 49},
  };
  return rows;
}

}  // namespace

EdgeRule default_sbp_rule(int N) { return N >= 8 ? EdgeRule::sbp42 : EdgeRule::sbp21; }

std::vector<double> edge_weights(int N, EdgeRule rule) {
  require_nodes(N);
  const double h = 1.0 / N;
  std::vector<double> w(N + 1, h);
  if (rule == EdgeRule::sbp42) {
    require(N >= 8, ErrorCode::invalid_argument, "the 4/2 SBP rule needs N >= 8");
    for (int k = 0; k < 4; ++k) {
      w[k] = kSbp42Norm[k] * h;
      w[N - k] = kSbp42Norm[k] * h;
    }
  } else {
    w[0] = w[N] = 0.5 * h;
  }
  return w;
}

double quadrature_edge(std::span<const double> samples, EdgeRule rule) {
  require(samples.size() >= 2, ErrorCode::invalid_argument, "edge quadrature needs at least 2 nodes");
  const int N = static_cast<int>(samples.size()) - 1;
  auto w = edge_weights(N, rule);
  double acc = 0.0;
  for (int k = 0; k <= N; ++k) acc += w[k] * samples[k];
  return acc;
}

Eigen::MatrixXd sbp_derivative_matrix(int N, EdgeRule rule) {
  require_nodes(N);
  const double inv_h = N;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  if (rule == EdgeRule::sbp42) {
    require(N >= 8, ErrorCode::invalid_argument, "the 4/2 SBP rule needs N >= 8");
    const auto& rows = sbp42_boundary_rows();
    for (int r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        D(r, c) = rows[r][c] * inv_h;
        D(N - r, N - c) = -rows[r][c] * inv_h;
      }
    }
    for (int k = 4; k <= N - 4; ++k) {
      D(k, k - 2) = inv_h / 12;
      D(k, k - 1) = -2 * inv_h / 3;
      D(k, k + 1) = 2 * inv_h / 3;
      D(k, k + 2) = -inv_h / 12;
    }
  } else {
    D(0, 0) = -inv_h;
    D(0, 1) = inv_h;
    D(N, N - 1) = -inv_h;
    D(N, N) = inv_h;
    for (int k = 1; k < N; ++k) {
      D(k, k - 1) = -0.5 * inv_h;
      D(k, k + 1) = 0.5 * inv_h;
    }
  }
  return D;
}

Eigen::MatrixXd sbp_derivative(const Eigen::MatrixXd& nodal, EdgeRule rule) {
  const int N = static_cast<int>(nodal.rows()) - 1;
  return sbp_derivative_matrix(N, rule) * nodal;
}

double quadrature_triangle(std::span<const double> samples, int N) {
  require(N >= 1, ErrorCode::invalid_argument, "triangle quadrature needs N >= 1");
  require(static_cast<int>(samples.size()) == lattice_size(N), ErrorCode::shape_mismatch,
          "sample count does not match the lattice");
  auto at = [&](int i, int j) { return samples[lattice_index(N, i, j)]; };
  double acc = 0.0;
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i + j < N; ++i) {
      acc += at(i, j) + at(i + 1, j) + at(i, j + 1);
      if (i + j <= N - 2) acc += at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1);
    }
  }
  return acc / (3.0 * 2.0 * N * N);
}

namespace {

// Derivative of nodal values along a line of `len` nodes at position `p`,
// unit parameter spacing; needs len >= 3.
template <class Get>
double line_derivative(Get get, int p, int len) {
  if (p == 0) return (-3 * get(0) + 4 * get(1) - get(2)) / 2;
  if (p == len - 1) return (3 * get(len - 1) - 4 * get(len - 2) + get(len - 3)) / 2;
  return (get(p + 1) - get(p - 1)) / 2;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lattice_gradient(const Eigen::MatrixXd& nodal, int N) {
  require(N >= 3, ErrorCode::invalid_argument, "lattice gradient needs N >= 3");
  require(nodal.rows() == lattice_size(N), ErrorCode::shape_mismatch,
          "nodal data does not match the lattice");
  const int m = static_cast<int>(nodal.cols());
  Eigen::MatrixXd d1(nodal.rows(), m), d2(nodal.rows(), m);
  for (int j = 0; j <= N; ++j) {
    for (int i = 0; i + j <= N; ++i) {
      const int row = lattice_index(N, i, j);
      const bool row_ok = j <= N - 2, col_ok = i <= N - 2, anti_ok = i + j >= 2;
      for (int c = 0; c < m; ++c) {
        auto along_row = [&] {
          return N * line_derivative([&](int p) { return nodal(lattice_index(N, p, j), c); }, i,
                                     N - j + 1);
        };
        auto along_col = [&] {
          return N * line_derivative([&](int p) { return nodal(lattice_index(N, i, p), c); }, j,
                                     N - i + 1);
        };
        // d/ds2 - d/ds1 along i + j = const
        auto along_anti = [&] {
          const int s = i + j;
          return N * line_derivative([&](int p) { return nodal(lattice_index(N, s - p, p), c); }, j,
                                     s + 1);
        };
        if (row_ok && col_ok) {
          d1(row, c) = along_row();
          d2(row, c) = along_col();
        } else if (row_ok && anti_ok) {
          d1(row, c) = along_row();
          d2(row, c) = along_anti() + d1(row, c);
        } else {
          d2(row, c) = along_col();
          d1(row, c) = d2(row, c) - along_anti();
        }
      }
    }
  }
  return {d1, d2};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
  require(m >= 1, ErrorCode::invalid_argument, "need at least one Gauss point");
  std::vector<double> x(m), w(m);
  for (int k = 0; k < m; ++k) {
    double z = std::cos(std::numbers::pi * (k + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int l = 2; l <= m; ++l) {
        double p2 = ((2.0 * l - 1) * z * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[m - 1 - k] = 0.5 * (1.0 + z);
    w[m - 1 - k] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

PiecewiseInterpolant::PiecewiseInterpolant(int N, int gauss_points) : N_(N) {
  require_nodes(N);
  p_ = N % 4 == 0 ? 4 : (N % 2 == 0 ? 2 : 1);
  const int segments = N / p_;
  auto [gx, gw] = gauss_legendre(gauss_points);
  const int Q = segments * gauss_points;
  value_op_ = Eigen::MatrixXd::Zero(Q, N + 1);
  deriv_op_ = Eigen::MatrixXd::Zero(Q, N + 1);
  weights_.resize(Q);
  const double seg_len = static_cast<double>(p_) / N;
  for (int s = 0; s < segments; ++s) {
    for (int g = 0; g < gauss_points; ++g) {
      const int q = s * gauss_points + g;
      weights_[q] = gw[g] * seg_len;
      // local coordinate u in [0, p], nodes at 0..p
      const double u = gx[g] * p_;
      for (int a = 0; a <= p_; ++a) {
        double val = 1.0, der = 0.0;
        for (int b = 0; b <= p_; ++b) {
          if (b == a) continue;
          double prod = 1.0 / (a - b);
          for (int c = 0; c <= p_; ++c)
            if (c != a && c != b) prod *= (u - c) / (a - c);
          der += prod;
          val *= (u - b) / (a - b);
        }
        value_op_(q, s * p_ + a) = val;
        deriv_op_(q, s * p_ + a) = der * N;  // du/dt = N
      }
    }
  }
}

}  // namespace courant
