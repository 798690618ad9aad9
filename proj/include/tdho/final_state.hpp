#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tdho/evolve.hpp"
#include "tdho/profile.hpp"
#include "tdho/rate_fit.hpp"

namespace tdho {

struct FinalStateConfig {
  double t_start = -30.0;  // seed time, <= -10 r0
  double dt = 5e-4;
  int checkpoints_per_decade = 12;
  Scheme scheme = Scheme::Strang;
  PotentialMode potential_mode = PotentialMode::Pointwise;
  double fit_inner_factor = 1.5;  // fit window [r0 * inner, |t_start| / outer]
  double fit_outer_factor = 4.0;
};

struct FinalStateResult {
  std::vector<double> ts;          // checkpoint times (negative, increasing)
  std::vector<double> e_weighted;  // ||<x>^beta U(0,t)(u - u_p)(t)||_2
  std::vector<double> e_l2;        // ||(u - u_p)(t)||_2
  RateFit mu_fit;                  // decay exponent of e_weighted in |t|
  Field u_at_stop;                 // u(-r0)
  double profile_l2 = 0.0;         // ||u_p|| = ||u_minus|| check value
};

inline std::vector<double> log_spaced_times(double from_abs, double to_abs, int per_decade,
                                            double sign) {
  require(from_abs > 0 && to_abs > 0 && per_decade >= 2, ErrorKind::ConfigInvalid,
          "bad log spacing request");
  double la = std::log10(from_abs), lb = std::log10(to_abs);
  int count = std::max(2, static_cast<int>(std::ceil(std::abs(lb - la) * per_decade)) + 1);
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    double f = static_cast<double>(i) / (count - 1);
    out[i] = sign * std::pow(10.0, la + f * (lb - la));
  }
  out.front() = sign * from_abs;
  out.back() = sign * to_abs;
  return out;
}

// Seeds the solution with the asymptotic profile at t_start and evolves
// forward to -r0, recording the weighted residual
// e(t) = ||U(0,t)(u - u_p)(t)||_{H^{0,beta}} at log-spaced checkpoints and its
// fitted decay exponent in |t|. The seeding makes e(t_start) = 0; the fit
// window therefore excludes the outer quarter-decade near the seed.
inline FinalStateResult final_state_solve(const PropagatorContext& ctx, const FinalDatum& datum,
                                          const FinalStateConfig& cfg, double t_stop_opt = 0.0) {
  double r0 = ctx.r0();
  double t_stop = t_stop_opt == 0.0 ? -r0 : t_stop_opt;
  require(t_stop <= -r0 * (1.0 - 1e-12), ErrorKind::OutsideValidity, "t_stop must be <= -r0");
  require(cfg.t_start <= -10.0 * r0, ErrorKind::OutsideValidity,
          "seed time must satisfy t_start <= -10 r0");

  Field u_seed = profile_up(ctx, datum, cfg.t_start);

  EvolveConfig ecfg;
  ecfg.eta = datum.eta;
  ecfg.p_c = ctx.params.p_c;
  ecfg.dt = cfg.dt;
  ecfg.t_begin = cfg.t_start;
  ecfg.t_end = t_stop;
  ecfg.scheme = cfg.scheme;
  ecfg.potential_mode = cfg.potential_mode;
  ecfg.sample_times =
      log_spaced_times(std::abs(cfg.t_start), std::abs(t_stop), cfg.checkpoints_per_decade, -1.0);

  Trajectory traj = evolve(ctx, ecfg, u_seed);

  FinalStateResult out;
  out.profile_l2 = u_seed.norm_l2();
  for (std::size_t i = 0; i < traj.observables.size(); ++i) {
    double t = traj.observables[i].t;
    Field up = profile_up(ctx, datum, t);
    Field diff = traj.fields[i] - up;
    out.e_l2.push_back(diff.norm_l2());
    Field pulled = apply_U(ctx, diff, t, 0.0);
    out.e_weighted.push_back(weighted_l2_norm(pulled, datum.beta));
    out.ts.push_back(t);
  }
  out.u_at_stop = traj.final_field;

  // fit e(|t|) ~ c |t|^{-mu} away from the seed transient and the stop edge
  std::vector<double> abs_t(out.ts.size()), ew(out.ts.size());
  for (std::size_t i = 0; i < out.ts.size(); ++i) {
    abs_t[i] = std::abs(out.ts[out.ts.size() - 1 - i]);
    ew[i] = out.e_weighted[out.ts.size() - 1 - i];
  }
  double lo = r0 * cfg.fit_inner_factor;
  double hi = std::abs(cfg.t_start) / cfg.fit_outer_factor;
  require(hi > lo, ErrorKind::FitFailed, "fit window empty; widen the time range");
  out.mu_fit = fit_power_law_window(abs_t, ew, lo, hi, 4);
  return out;
}

}  // namespace tdho
