#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tdho/errors.hpp"

namespace tdho {

// Uniform Cartesian grid on [-L, L)^d with n points per axis (power of two).
// Physical nodes x_j = -L + j dx; dual nodes xi_k = (k - n/2) dxi with
// dxi = pi / L, covering [-pi/dx, pi/dx). With this pairing the discrete
// transform is the continuum unitary transform on band-limited fields.
struct Grid {
  int d = 1;
  int n = 16;
  double L = 1.0;

  Grid() = default;
  Grid(int d_, int n_, double L_) : d(d_), n(n_), L(L_) {
    require(d >= 1 && d <= 3, ErrorKind::ShapeMismatch, "d must be 1, 2 or 3");
    require(n >= 16 && (n & (n - 1)) == 0, ErrorKind::ShapeMismatch,
            "n must be a power of two >= 16");
    require(L > 0.0, ErrorKind::ShapeMismatch, "L must be positive");
  }

  double dx() const { return 2.0 * L / n; }
  double dxi() const { return M_PI / L; }
  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
  }

  double x(int j) const { return -L + j * dx(); }
  double xi(int k) const { return (k - n / 2) * dxi(); }

  std::vector<double> xs() const {
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = x(j);
    return v;
  }
  std::vector<double> xis() const {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = xi(k);
    return v;
  }

  // per-axis index decomposition of a flat row-major index
  void unravel(std::size_t flat, int idx[3]) const {
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % n);
      flat /= n;
    }
  }

  // |coordinate|^2 at a flat index, on the physical (or, with xi=true, dual) side
  double radius_sq(std::size_t flat, bool dual) const {
    int idx[3] = {0, 0, 0};
    unravel(flat, idx);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      double c = dual ? xi(idx[a]) : x(idx[a]);
      r2 += c * c;
    }
    return r2;
  }

  bool operator==(const Grid& o) const { return d == o.d && n == o.n && L == o.L; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

}  // namespace tdho
