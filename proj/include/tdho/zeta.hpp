#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tdho/csv.hpp"
#include "tdho/errors.hpp"
#include "tdho/sigma.hpp"

namespace tdho {

// Both fundamental solutions of zeta'' + sigma(t) zeta = 0 on a symmetric
// uniform node grid, with derivatives retained for Hermite interpolation:
//   zeta1(0) = 1, zeta1'(0) = 0,   zeta2(0) = 0, zeta2'(0) = 1.
// The ODE has no first-order term, so the Wronskian zeta1 zeta2' - zeta1' zeta2
// is exactly 1; its drift is the integrator's accuracy meter.
struct ZetaSolution {
  SigmaModel model;
  std::vector<double> times;  // -t_max .. t_max, uniform
  std::vector<double> z1, z1p, z2, z2p;
  int interpolation_order = 3;

  double t_max() const { return times.empty() ? 0.0 : times.back(); }

  std::size_t locate(double t) const {
    require(!times.empty(), ErrorKind::OutsideValidity, "empty zeta grid");
    require(t >= times.front() && t <= times.back(), ErrorKind::OutsideValidity,
            "zeta grid does not cover t=" + std::to_string(t));
    double h = times[1] - times[0];
    auto idx = static_cast<std::ptrdiff_t>((t - times.front()) / h);
    if (idx < 0) idx = 0;
    if (idx >= static_cast<std::ptrdiff_t>(times.size()) - 1)
      idx = static_cast<std::ptrdiff_t>(times.size()) - 2;
    return static_cast<std::size_t>(idx);
  }

  struct Values {
    double z1, z1p, z2, z2p;
  };

  // Cubic Hermite between nodes; zeta'' = -sigma zeta supplies the slope data
  // for the derivative channels.
  Values eval(double t) const {
    std::size_t i = locate(t);
    double t0 = times[i], t1 = times[i + 1];
    double h = t1 - t0;
    double s = (t - t0) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    double h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s);
    double h11 = s * s * (s - 1);
    double s0 = model(t0), s1 = model(t1);
    auto hermite = [&](double y0, double d0, double y1, double d1) {
      return h00 * y0 + h * h10 * d0 + h01 * y1 + h * h11 * d1;
    };
    Values v;
    v.z1 = hermite(z1[i], z1p[i], z1[i + 1], z1p[i + 1]);
    v.z2 = hermite(z2[i], z2p[i], z2[i + 1], z2p[i + 1]);
    v.z1p = hermite(z1p[i], -s0 * z1[i], z1p[i + 1], -s1 * z1[i + 1]);
    v.z2p = hermite(z2p[i], -s0 * z2[i], z2p[i + 1], -s1 * z2[i + 1]);
    return v;
  }

  double zeta1(double t) const { return eval(t).z1; }
  double zeta2(double t) const { return eval(t).z2; }
  double zeta1_prime(double t) const { return eval(t).z1p; }
  double zeta2_prime(double t) const { return eval(t).z2p; }

  double max_wronskian_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      worst = std::max(worst, std::abs(z1[i] * z2p[i] - z1p[i] * z2[i] - 1.0));
    return worst;
  }

  void export_csv(const std::string& path) const {
    CsvWriter w(path, {"t", "zeta1", "zeta1p", "zeta2", "zeta2p"});
    for (std::size_t i = 0; i < times.size(); ++i)
      w.row({times[i], z1[i], z1p[i], z2[i], z2p[i]});
  }
};

namespace detail {

// Dormand-Prince 5(4) pair on the 4-vector (z1, z1p, z2, z2p).
struct DopriStepper {
  using State = std::array<double, 4>;
  const SigmaModel& model;
  double rtol, atol;

  State deriv(double t, const State& y) const {
    double s = model(t);
    return {y[1], -s * y[0], y[3], -s * y[2]};
  }

  // One accepted step; h carries the direction sign. Returns the actually
  // used h and suggests the next one.
  void step(double& t, State& y, double& h, double h_limit_abs) const {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    int guard = 0;
    for (;;) {
      if (std::abs(h) > h_limit_abs) h = std::copysign(h_limit_abs, h);
      State ytmp;
      State k1 = deriv(t, y);
      for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
      State k2 = deriv(t + c2 * h, ytmp);
      for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      State k3 = deriv(t + c3 * h, ytmp);
      for (int i = 0; i < 4; ++i)
        ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      State k4 = deriv(t + c4 * h, ytmp);
      for (int i = 0; i < 4; ++i)
        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      State k5 = deriv(t + c5 * h, ytmp);
      for (int i = 0; i < 4; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                              a65 * k5[i]);
      State k6 = deriv(t + h, ytmp);
      State y5;
      for (int i = 0; i < 4; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      State k7 = deriv(t + h, y5);

      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                        e7 * k7[i]);
        double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (err <= 1.0 || std::abs(h) <= 1e-14) {
        t += h;
        y = y5;
        double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        return;
      }
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      require(++guard < 64, ErrorKind::NonConvergent, "step size underflow in zeta integrator");
    }
  }
};

}  // namespace detail

// Integrates the fundamental system outward from t=0 on [-t_max, t_max],
// emitting nodes every `step`. Adaptive 5(4) substeps; near the |t| = r1 kink
// of the piecewise model the step lands exactly on the kink so every stage
// sees smooth sigma.
inline ZetaSolution solve_zeta(const SigmaModel& model, double t_max, double step,
                               double rtol = 1e-12, double atol = 1e-14) {
  require(t_max > 0.0, ErrorKind::InvalidModel, "t_max must be positive");
  require(step > 0.0 && step <= t_max, ErrorKind::InvalidModel, "bad output step");
  if (model.kind == SigmaKind::PaperExample)
    require(model.sigma1 < 0.25, ErrorKind::InvalidModel, "sigma1 must be < 1/4");
  require(model.covers(-t_max, t_max), ErrorKind::NonConvergent,
          "sigma table does not cover [-t_max, t_max]");

  auto n_side = static_cast<std::size_t>(std::llround(t_max / step));
  ZetaSolution sol;
  sol.model = model;
  sol.times.resize(2 * n_side + 1);
  for (std::size_t i = 0; i < sol.times.size(); ++i)
    sol.times[i] = (static_cast<double>(i) - static_cast<double>(n_side)) * step;
  sol.z1.assign(sol.times.size(), 0.0);
  sol.z1p.assign(sol.times.size(), 0.0);
  sol.z2.assign(sol.times.size(), 0.0);
  sol.z2p.assign(sol.times.size(), 0.0);

  detail::DopriStepper stepper{model, rtol, atol};

  auto integrate_side = [&](int direction) {
    detail::DopriStepper::State y = {1.0, 0.0, 0.0, 1.0};
    double t = 0.0;
    double h = direction * std::min(step, 1e-2);
    std::size_t center = n_side;
    sol.z1[center] = 1.0;
    sol.z1p[center] = 0.0;
    sol.z2[center] = 0.0;
    sol.z2p[center] = 1.0;
    for (std::size_t k = 1; k <= n_side; ++k) {
      double target = direction * static_cast<double>(k) * step;
      while (direction * (target - t) > 1e-13 * std::max(1.0, std::abs(target))) {
        double remaining = target - t;
        double h_limit = std::abs(remaining);
        if (model.kind == SigmaKind::PaperExample) {
          // do not step across the kink; land on it instead
          double kink = direction * model.r1;
          double to_kink = kink - t;
          if (direction * to_kink > 1e-13) h_limit = std::min(h_limit, std::abs(to_kink));
        }
        if (std::abs(h) > std::abs(remaining)) h = remaining;
        stepper.step(t, y, h, h_limit);
      }
      std::size_t idx = direction > 0 ? center + k : center - k;
      sol.z1[idx] = y[0];
      sol.z1p[idx] = y[1];
      sol.z2[idx] = y[2];
      sol.z2p[idx] = y[3];
    }
  };

  integrate_side(+1);
  integrate_side(-1);
  return sol;
}

}  // namespace tdho
