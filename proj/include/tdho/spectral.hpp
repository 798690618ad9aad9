#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/fft.hpp"
#include "tdho/field.hpp"

namespace tdho {

enum class FourierDirection { Forward, Inverse };

// Unitary continuum-normalized transform with kernel e^{-i x.xi} / (2 pi)^{d/2}.
// With x_j = -L + j dx and xi_k = (k - n/2) dxi the continuum transform reduces
// to a standard FFT with alternating-sign pre/post twiddles (n is a multiple
// of 4, so the corner phase e^{i pi n/2} is 1), and Plancherel is exact up to
// rounding.
inline Field fourier(const Field& f, FourierDirection dir) {
  if (dir == FourierDirection::Forward)
    require(f.gauge != Gauge::FrequencySide, ErrorKind::ShapeMismatch,
            "forward transform expects physical-side samples");
  else
    require(f.gauge == Gauge::FrequencySide, ErrorKind::ShapeMismatch,
            "inverse transform expects frequency-side samples");

  Field out = f;
  bool inverse = dir == FourierDirection::Inverse;
  double per_axis = (inverse ? f.grid.dxi() : f.grid.dx()) / std::sqrt(2.0 * M_PI);
  for (int axis = 0; axis < f.grid.d; ++axis) {
    detail::for_each_line(out.values, out.grid, axis, [&](Complex* line) {
      for (int j = 1; j < out.grid.n; j += 2) line[j] = -line[j];
      detail::fft_line(line, out.grid.n, inverse);
      for (int k = 1; k < out.grid.n; k += 2) line[k] = -line[k];
      for (int k = 0; k < out.grid.n; ++k) line[k] *= per_axis;
    });
  }
  out.gauge = inverse ? Gauge::Physical : Gauge::FrequencySide;
  return out;
}

// Multiplication by e^{+- i |x|^2 / (2 tau)} on the current representation's
// coordinates. The rate form below is what the propagator uses internally;
// division by tau is the caller's concern here.
inline Field chirp_multiply(const Field& f, double tau, int sign) {
  require(tau != 0.0, ErrorKind::ZeroParameter, "chirp parameter tau must be nonzero");
  require(sign == 1 || sign == -1, ErrorKind::ZeroParameter, "sign must be +-1");
  Field out = f;
  bool dual = f.gauge == Gauge::FrequencySide;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double phase = sign * f.grid.radius_sq(i, dual) / (2.0 * tau);
    out.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  return out;
}

// e^{i |x|^2 rate / 2}; rate = 1/tau, well defined where the chirp parameter
// itself would blow up (e.g. zeta2' = 0).
inline Field chirp_rate(const Field& f, double rate) {
  Field out = f;
  if (rate == 0.0) return out;
  bool dual = f.gauge == Gauge::FrequencySide;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double phase = 0.5 * rate * f.grid.radius_sq(i, dual);
    out.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  return out;
}

namespace detail {

// out[j] = scale_per_axis * sum_m e^{sign * i * dst[j] * src[m]} in[m], applied
// along every axis. Both coordinate lists are uniform, so each row is a
// geometric phase recurrence; the rotator is refreshed periodically to keep
// the accumulated rounding at the 1e-14 level.
//
// The equispaced quadrature cannot distinguish an evaluation frequency from
// its alias modulo 2 pi / dq; destinations beyond the quadrature's Nyquist
// extent would return wrapped copies of the field, so they are projected to
// zero instead (the band-limit convention: content there is unrepresentable).
inline void eval_transform_axis(std::vector<Complex>& data, const Grid& g, int axis,
                                const std::vector<double>& src, const std::vector<double>& dst,
                                double sign, double scale_per_axis) {
  int n = g.n;
  double dq = src[1] - src[0];
  double nyquist = M_PI / std::abs(dq) * (1.0 + 1e-12);
  std::vector<Complex> out_line(n);
  for_each_line(data, g, axis, [&](Complex* line) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(dst[j]) > nyquist) {
        out_line[j] = Complex(0.0, 0.0);
        continue;
      }
      double p = sign * dst[j];
      Complex rot(std::cos(p * dq), std::sin(p * dq));
      Complex w(std::cos(p * src[0]), std::sin(p * src[0]));
      Complex acc(0.0, 0.0);
      for (int m = 0; m < n; ++m) {
        if ((m & 255) == 255) {
          double ph = p * src[m];
          w = Complex(std::cos(ph), std::sin(ph));
        }
        acc += w * line[m];
        w *= rot;
      }
      out_line[j] = acc * scale_per_axis;
    }
    for (int j = 0; j < n; ++j) line[j] = out_line[j];
  });
}

}  // namespace detail

// Band-limited evaluation transform: interprets `f` as its trigonometric
// interpolant and returns samples of the (forward or inverse) continuum
// transform at the scaled destination coordinates. This is the workhorse
// behind dilation and the factorized propagator; O(n^2) per axis.
inline Field nonuniform_transform(const Field& f, const std::vector<double>& src,
                                  const std::vector<double>& dst, double sign,
                                  double scale_per_axis, Gauge out_gauge) {
  Field out = f;
  for (int axis = 0; axis < f.grid.d; ++axis)
    detail::eval_transform_axis(out.values, out.grid, axis, src, dst, sign, scale_per_axis);
  out.gauge = out_gauge;
  return out;
}

// (D(s) f)(x) = (i s)^{-d/2} f(x / s), evaluated through the trigonometric
// interpolant of f; exact for band-limited content that keeps clear of the
// box boundary. (i s)^{-d/2} uses the principal branch.
inline Field dilate(const Field& f, double scale) {
  require(scale != 0.0, ErrorKind::ZeroParameter, "dilation scale must be nonzero");
  require(f.gauge != Gauge::FrequencySide, ErrorKind::ShapeMismatch,
          "dilate expects physical-side samples");
  Complex prefactor = std::pow(Complex(0.0, scale), Complex(-0.5 * f.grid.d, 0.0));
  if (scale == 1.0) {
    Field out = f;
    out *= prefactor;
    return out;
  }
  Field hat = fourier(f, FourierDirection::Forward);
  if (std::abs(scale) < 1.0) {
    // shrinking support in x expands the spectrum; refuse if the outer
    // quarter of the spectrum already carries weight
    int n = f.grid.n;
    double outer = 0.0, total = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < hat.values.size(); ++i) {
      double m = std::norm(hat.values[i]);
      total += m;
      hat.grid.unravel(i, idx);
      for (int a = 0; a < f.grid.d; ++a)
        if (idx[a] < n / 8 || idx[a] >= n - n / 8) {
          outer += m;
          break;
        }
    }
    require(total == 0.0 || outer <= 1e-10 * total, ErrorKind::AliasRisk,
            "|scale| < 1 with occupied outer spectrum would alias");
  }
  std::vector<double> dst = f.grid.xs();
  for (double& v : dst) v /= scale;
  Field out = nonuniform_transform(hat, f.grid.xis(), dst, +1.0,
                                   f.grid.dxi() / std::sqrt(2.0 * M_PI), f.gauge);
  out *= prefactor;
  return out;
}

// |nabla|^s in the field's own variable; s = 0 is the identity. For a
// physical-side field this is the |xi|^s multiplier; for a frequency-side
// field the roles of the two grids swap (the dual of the xi-grid is exactly
// the x-grid).
inline Field frac_derivative(const Field& f, double s) {
  require(s >= 0.0, ErrorKind::ZeroParameter, "order must be >= 0");
  if (s == 0.0) return f;
  if (f.gauge == Gauge::FrequencySide) {
    Field g = fourier(f, FourierDirection::Inverse);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      double r = std::sqrt(g.grid.radius_sq(i, false));
      g.values[i] *= std::pow(r, s);
    }
    Field out = fourier(g, FourierDirection::Forward);
    out.time = f.time;
    return out;
  }
  Field hat = fourier(f, FourierDirection::Forward);
  for (std::size_t i = 0; i < hat.values.size(); ++i) {
    double r = std::sqrt(hat.grid.radius_sq(i, true));
    hat.values[i] *= std::pow(r, s);
  }
  Field out = fourier(hat, FourierDirection::Inverse);
  out.gauge = f.gauge;
  return out;
}

}  // namespace tdho
