#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tdho/evolve.hpp"
#include "tdho/final_state.hpp"
#include "tdho/profile.hpp"
#include "tdho/rate_fit.hpp"

namespace tdho {

// Admissible regularization exponent for d >= 2: the midpoint of the open
// window (0, (beta-delta)(1+p_c-delta)(1-2 lambda)). In d = 1 no
// regularization is used and chi must be 0.
inline double default_chi(const AsymptoticParams& params, double beta, double delta) {
  if (params.d == 1) return 0.0;
  return 0.5 * (beta - delta) * (1.0 + params.p_c - delta) * (1.0 - 2.0 * params.lambda);
}

// Running value of theta(t, xi) on the frequency grid; the phase correction
// is P(t) = exp(i theta(t)). Accumulation is trapezoid in log t, which is
// exact for the 1/t kernel a frozen field produces.
struct PhaseAccumulator {
  std::vector<double> theta;
  double t_current = 0.0;
  double chi = 0.0;
  std::vector<double> last_integrand;  // integrand * t at t_current
  bool primed = false;

  PhaseAccumulator(std::size_t size, double t0, double chi_)
      : theta(size, 0.0), t_current(t0), chi(chi_), last_integrand(size, 0.0) {}

  void advance(double t_new, const std::vector<double>& integrand_times_t, double eta) {
    if (!primed) {
      last_integrand = integrand_times_t;
      t_current = t_new;
      primed = true;
      return;
    }
    double dl = std::log(t_new) - std::log(t_current);
    for (std::size_t i = 0; i < theta.size(); ++i)
      theta[i] += eta * 0.5 * (integrand_times_t[i] + last_integrand[i]) * dl;
    last_integrand = integrand_times_t;
    t_current = t_new;
  }
};

struct ExtractConfig {
  double t_end = 100.0;
  double dt = 5e-4;
  double chi = std::numeric_limits<double>::quiet_NaN();  // NaN -> default rule
  double delta = 0.6;
  double beta = 0.7;  // for the smallness record of the handoff state
  double eta = 0.0;
  int checkpoints_per_decade = 12;
  int theta_nodes_per_decade = 96;
  Scheme scheme = Scheme::Strang;
  PotentialMode potential_mode = PotentialMode::Pointwise;
};

struct ScatterResult {
  Field u_plus;  // physical-side v_p(T_end); H^{0,delta} is its weighted L2
  std::vector<double> ts;             // checkpoint times (the later of each pair)
  std::vector<double> cauchy_hdelta;  // ||v_p(t_i) - v_p(t_{i-1})||_{H^{0,delta}}
  std::vector<double> cauchy_l2;
  std::vector<double> mu_running;
  RateFit mu_fit;
  double chi_used = 0.0;
  double handoff_weighted = 0.0;  // ||U(0,r0) u(r0)||_{H^{0,beta}}
  // magnitudes of the modification/remainder pieces at checkpoints
  std::vector<double> i1_norm, i2_norm, a_norm;
};

// Evolves from u(r0) forward, accumulates the phase correction on the
// frequency grid, forms v_p(t) = F^{-1} e^{i theta} F M_+ U(0,t) u(t) at
// log-spaced checkpoints, and reads off u_+ = v_p(T_end) together with the
// Cauchy decay rate of the checkpoints.
inline ScatterResult forward_extract(const PropagatorContext& ctx, const Field& u_r0,
                                     const ExtractConfig& cfg) {
  double r0 = ctx.r0();
  int d = ctx.grid.d;
  require(cfg.t_end >= 10.0 * r0, ErrorKind::OutsideValidity, "t_end must be >= 10 r0");
  double chi = cfg.chi;
  if (std::isnan(chi)) chi = default_chi(ctx.params, cfg.beta, cfg.delta);
  if (d == 1)
    require(chi == 0.0, ErrorKind::DomainError, "chi must be 0 in dimension 1");
  else
    require(chi > 0.0, ErrorKind::DomainError, "chi must be positive in dimension 2, 3");

  ScatterResult out;
  out.chi_used = chi;
  {
    Field pulled = apply_U(ctx, u_r0, r0, 0.0);
    out.handoff_weighted = weighted_l2_norm(pulled, cfg.beta);
  }

  std::vector<double> nodes = log_spaced_times(r0, cfg.t_end, cfg.theta_nodes_per_decade, +1.0);
  int cp_stride = std::max(1, cfg.theta_nodes_per_decade / cfg.checkpoints_per_decade);

  EvolveConfig ecfg;
  ecfg.eta = cfg.eta;
  ecfg.p_c = ctx.params.p_c;
  ecfg.dt = cfg.dt;
  ecfg.t_begin = r0;
  ecfg.t_end = cfg.t_end;
  ecfg.scheme = cfg.scheme;
  ecfg.potential_mode = cfg.potential_mode;
  ecfg.sample_times = nodes;
  Trajectory traj = evolve(ctx, ecfg, u_r0);
  require(traj.observables.size() == nodes.size(), ErrorKind::NonConvergent,
          "trajectory sampling mismatch");

  PhaseAccumulator acc(ctx.grid.size(), r0, chi);
  const double inv_exp = 1.0 / (1.0 - ctx.params.lambda);
  Field prev_vp;
  bool have_prev = false;
  double pc = ctx.params.p_c;

  std::vector<double> fit_t, fit_v;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double t = nodes[i];
    Field v = apply_U(ctx, traj.fields[i], t, 0.0);
    v = apply_mplus(ctx, v, t, +1);
    Field vhat = fourier(v, FourierDirection::Forward);
    auto zv = ctx.zeta_at(t);
    double zfac = std::pow(std::abs(zv.z2), -inv_exp);
    std::vector<double> integrand(vhat.values.size());
    if (d == 1) {
      for (std::size_t k = 0; k < integrand.size(); ++k)
        integrand[k] = std::pow(std::abs(vhat.values[k]), pc) * zfac * t;
    } else {
      double treg = std::pow(t, -chi);
      for (std::size_t k = 0; k < integrand.size(); ++k)
        integrand[k] = std::pow(treg + std::norm(vhat.values[k]), 0.5 * pc) * zfac * t;
    }
    acc.advance(t, integrand, cfg.eta);

    bool is_checkpoint = (i % cp_stride == 0) || (i + 1 == nodes.size());
    if (!is_checkpoint) continue;

    Field vp_hat = vhat;
    for (std::size_t k = 0; k < vp_hat.values.size(); ++k)
      vp_hat.values[k] *= Complex(std::cos(acc.theta[k]), std::sin(acc.theta[k]));
    Field vp = fourier(vp_hat, FourierDirection::Inverse);
    vp.time = t;

    // modification/remainder magnitudes at this checkpoint
    {
      double m2r = m2_rate(zv, ctx.params.tail(t));
      Field m2v = chirp_rate(v, m2r);
      Field n1 = gauge_nonlinearity(fourier(m2v, FourierDirection::Forward), 1.0, pc);
      Field n1p = fourier(n1, FourierDirection::Inverse);
      Field i1 = fourier(chirp_rate(n1p, -m2r) - n1p, FourierDirection::Forward);
      out.i1_norm.push_back(i1.norm_l2());
      Field i2 = n1 - gauge_nonlinearity(vhat, 1.0, pc);
      out.i2_norm.push_back(i2.norm_l2());
      if (d >= 2) {
        double treg = std::pow(t, -chi);
        double s = 0.0;
        for (const Complex& z : vhat.values) {
          double az = std::abs(z);
          double a0 = std::pow(az, pc) - std::pow(treg + az * az, 0.5 * pc);
          s += a0 * a0 * std::norm(z);
        }
        out.a_norm.push_back(std::sqrt(s * vhat.cell_weight()));
      } else {
        out.a_norm.push_back(0.0);
      }
    }

    if (have_prev) {
      Field diff = vp - prev_vp;
      out.ts.push_back(t);
      out.cauchy_hdelta.push_back(weighted_l2_norm(diff, cfg.delta));
      out.cauchy_l2.push_back(diff.norm_l2());
      if (out.ts.size() >= 4) {
        RateFit running = fit_power_law(out.ts, out.cauchy_hdelta);
        out.mu_running.push_back(running.mu);
      } else {
        out.mu_running.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    prev_vp = vp;
    have_prev = true;
    if (i + 1 == nodes.size()) out.u_plus = vp;
  }

  // settling check over the final decade: the second half must not exceed
  // the first half (medians)
  {
    std::vector<double> last;
    for (std::size_t i = 0; i < out.ts.size(); ++i)
      if (out.ts[i] >= cfg.t_end / 10.0) last.push_back(out.cauchy_hdelta[i]);
    require(last.size() >= 4, ErrorKind::InsufficientSamples,
            "too few checkpoints in the final decade");
    std::size_t half = last.size() / 2;
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    double m1 = median({last.begin(), last.begin() + half});
    double m2 = median({last.begin() + half, last.end()});
    require(m2 <= m1, ErrorKind::NotSettled,
            "Cauchy differences fail to decrease over the final decade");
  }
  out.mu_fit = fit_power_law_window(out.ts, out.cauchy_hdelta, cfg.t_end / 10.0, cfg.t_end, 6);
  return out;
}

}  // namespace tdho
