#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/grid.hpp"

namespace tdho {

using Complex = std::complex<double>;

enum class Gauge { Physical, Profile, FrequencySide };

inline const char* to_string(Gauge g) {
  switch (g) {
    case Gauge::Physical: return "physical";
    case Gauge::Profile: return "profile";
    case Gauge::FrequencySide: return "frequency";
  }
  return "?";
}

inline Gauge gauge_from_string(const std::string& s) {
  if (s == "physical") return Gauge::Physical;
  if (s == "profile") return Gauge::Profile;
  if (s == "frequency") return Gauge::FrequencySide;
  fail(ErrorKind::Io, "unknown gauge tag '" + s + "'");
}

// Complex samples on a Grid with a timestamp and a tag recording which
// representation the samples live in. Quadrature weight for the L2 pairing is
// dx^{d/2} on the physical side and dxi^{d/2} on the dual side.
struct Field {
  Grid grid;
  std::vector<Complex> values;
  double time = 0.0;
  Gauge gauge = Gauge::Physical;

  Field() = default;
  Field(const Grid& g, Gauge tag = Gauge::Physical, double t = 0.0)
      : grid(g), values(g.size(), Complex(0.0, 0.0)), time(t), gauge(tag) {}

  double cell_weight() const {
    double w = gauge == Gauge::FrequencySide ? grid.dxi() : grid.dx();
    double acc = 1.0;
    for (int a = 0; a < grid.d; ++a) acc *= w;
    return acc;  // dx^d (or dxi^d)
  }

  double norm_l2() const {
    double s = 0.0;
    for (const Complex& v : values) s += std::norm(v);
    return std::sqrt(s * cell_weight());
  }

  double norm_l1() const {
    double s = 0.0;
    for (const Complex& v : values) s += std::abs(v);
    return s * cell_weight();
  }

  double norm_linf() const {
    double m = 0.0;
    for (const Complex& v : values) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (const Complex& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  Field& operator*=(Complex c) {
    for (Complex& v : values) v *= c;
    return *this;
  }
  Field& operator*=(double c) {
    for (Complex& v : values) v *= c;
    return *this;
  }
  Field& operator+=(const Field& o) {
    require(grid == o.grid && values.size() == o.values.size(), ErrorKind::ShapeMismatch,
            "field shape mismatch in +=");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require(grid == o.grid && values.size() == o.values.size(), ErrorKind::ShapeMismatch,
            "field shape mismatch in -=");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }

  friend Field operator-(Field a, const Field& b) {
    a -= b;
    return a;
  }
  friend Field operator+(Field a, const Field& b) {
    a += b;
    return a;
  }
  friend Field operator*(Complex c, Field f) {
    f *= c;
    return f;
  }

  // Fill from a callable of the flat-index coordinates of the current side.
  template <typename F>
  void fill(F&& fn) {
    bool dual = gauge == Gauge::FrequencySide;
    int idx[3];
    for (std::size_t i = 0; i < values.size(); ++i) {
      grid.unravel(i, idx);
      double c[3] = {0, 0, 0};
      for (int a = 0; a < grid.d; ++a) c[a] = dual ? grid.xi(idx[a]) : grid.x(idx[a]);
      values[i] = fn(c);
    }
  }
};

inline double distance_l2(const Field& a, const Field& b) {
  require(a.grid == b.grid, ErrorKind::ShapeMismatch, "grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.cell_weight());
}

// Mass fraction within the outer 1/16 of the box along any axis; fields
// entering dilation must keep this below ~1e-10 or the periodic wrap of the
// trigonometric interpolant becomes visible.
inline double boundary_mass_fraction(const Field& f) {
  int n = f.grid.n;
  int margin = n / 16;
  double total = 0.0, boundary = 0.0;
  int idx[3];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double m = std::norm(f.values[i]);
    total += m;
    f.grid.unravel(i, idx);
    for (int a = 0; a < f.grid.d; ++a) {
      if (idx[a] < margin || idx[a] >= n - margin) {
        boundary += m;
        break;
      }
    }
  }
  return total > 0.0 ? boundary / total : 0.0;
}

inline Field gaussian_field(const Grid& g, double amplitude, double width, double t = 0.0) {
  Field f(g, Gauge::Physical, t);
  f.fill([&](const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < g.d; ++a) r2 += x[a] * x[a];
    return Complex(amplitude * std::exp(-r2 / (2.0 * width * width)), 0.0);
  });
  return f;
}

}  // namespace tdho
