#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/norms.hpp"
#include "tdho/propagator.hpp"
#include "tdho/spectral.hpp"

namespace tdho {

enum class Scheme { Strang, Lie };
enum class PotentialMode { Pointwise, ExactQuadraticSubstep };

struct EvolveConfig {
  double eta = 0.0;
  double p_c = 2.0;
  double dt = 1e-3;
  double t_begin = 0.0;
  double t_end = 1.0;
  Scheme scheme = Scheme::Strang;
  PotentialMode potential_mode = PotentialMode::Pointwise;
  double weighted_beta = 0.0;  // > 0 records the Galilean-weighted observable
  double blowup_factor = 1e3;
  bool check_cfl = true;
  std::vector<double> sample_times;
};

struct TrajectorySample {
  double t = 0.0;
  double mass = 0.0;
  double linf = 0.0;
  double scaled_linf = 0.0;  // |t|^{d(1-lambda)/2} ||u||_inf
  double weighted = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<TrajectorySample> observables;
  std::vector<Field> fields;  // aligned with observables
  Field final_field;
};

// Exact pointwise flow of i du/dt = (sigma_phase/dt |x|^2/2 + eta |u|^{p_c}) u
// over one substep: the modulus is invariant, so the phase rotation is the
// closed-form solution. sigma_phase carries the already-integrated potential
// weight (sigma_mid * h or the exact integral of sigma over the substep).
inline void pointwise_phase_step(Field& u, const std::vector<double>& x_sq, double sigma_phase,
                                 double eta, double p_c, double h) {
  const std::size_t m = u.values.size();
  for (std::size_t i = 0; i < m; ++i) {
    double amp = std::abs(u.values[i]);
    double phase = -0.5 * sigma_phase * x_sq[i];
    if (eta != 0.0) phase -= eta * h * std::pow(std::max(amp, 1e-300), p_c);
    u.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
}

namespace detail {

struct KineticCache {
  const Grid* grid = nullptr;
  std::map<double, std::vector<double>> phases;  // h -> -|xi|^2 h / 2

  const std::vector<double>& phase_for(const Grid& g, double h) {
    if (grid == nullptr || !(*grid == g)) {
      phases.clear();
      grid = &g;
    }
    auto it = phases.find(h);
    if (it != phases.end()) return it->second;
    if (phases.size() > 64) phases.clear();
    std::vector<double> ph(g.size());
    for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = -0.5 * h * g.radius_sq(i, true);
    return phases.emplace(h, std::move(ph)).first->second;
  }
};

inline void kinetic_step(Field& u, double h, KineticCache& cache) {
  Field hat = fourier(u, FourierDirection::Forward);
  const std::vector<double>& ph = cache.phase_for(u.grid, h);
  for (std::size_t i = 0; i < hat.values.size(); ++i)
    hat.values[i] *= Complex(std::cos(ph[i]), std::sin(ph[i]));
  u = fourier(hat, FourierDirection::Inverse);
}

}  // namespace detail

// Full nonlinear evolution by operator splitting: the quadratic potential and
// the gauge-invariant nonlinearity share one exact pointwise phase substep,
// the kinetic half is exact in the dual basis. Runs in either time direction.
inline Trajectory evolve(const PropagatorContext& ctx, const EvolveConfig& cfg, const Field& u0) {
  require(u0.gauge == Gauge::Physical, ErrorKind::ShapeMismatch, "evolve expects physical side");
  require(u0.grid == ctx.grid, ErrorKind::ShapeMismatch, "field grid differs from context grid");
  require(cfg.dt > 0.0, ErrorKind::CFLViolation, "dt must be positive");
  require(std::abs(cfg.p_c - ctx.params.p_c) < 1e-9, ErrorKind::InvalidModel,
          "config p_c inconsistent with extracted asymptotics");
  const SigmaModel& model = ctx.model();
  if (cfg.check_cfl) {
    double sig_max = model.max_abs_on(cfg.t_begin, cfg.t_end);
    require(cfg.dt * sig_max * ctx.grid.L * ctx.grid.L < 0.5, ErrorKind::CFLViolation,
            "dt does not resolve max|sigma| (dt * max|sigma| * L^2 >= 0.5)");
  }
  require(boundary_mass_fraction(u0) < 1e-10, ErrorKind::BoundaryMass,
          "initial field carries boundary mass; enlarge the box");

  const double dir = cfg.t_end >= cfg.t_begin ? 1.0 : -1.0;
  const int d = ctx.grid.d;
  const double lam = ctx.params.lambda;

  // snap points the stepper must land on exactly: sample times, the sigma
  // kink radii and the origin
  std::vector<double> stops = cfg.sample_times;
  for (double s : {-model.r1, 0.0, model.r1}) {
    if (model.kind != SigmaKind::PaperExample && s != 0.0) continue;
    if (dir * (s - cfg.t_begin) > 1e-12 && dir * (cfg.t_end - s) > 1e-12) stops.push_back(s);
  }
  stops.push_back(cfg.t_end);
  std::sort(stops.begin(), stops.end());
  if (dir < 0) std::reverse(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  std::vector<double> x_sq(ctx.grid.size());
  for (std::size_t i = 0; i < x_sq.size(); ++i) x_sq[i] = ctx.grid.radius_sq(i, false);
  detail::KineticCache kin;

  Field u = u0;
  u.time = cfg.t_begin;
  double t = cfg.t_begin;
  const double linf0 = u.norm_linf();

  Trajectory traj;
  auto record = [&](double at) {
    TrajectorySample s;
    s.t = at;
    s.mass = u.norm_l2();
    s.linf = u.norm_linf();
    s.scaled_linf = std::pow(std::abs(at), 0.5 * d * (1.0 - lam)) * s.linf;
    if (cfg.weighted_beta > 0.0 &&
        (at == 0.0 || std::abs(at) >= ctx.r0() * (1.0 - 1e-12))) {
      s.weighted = norm(u, NormSpec::galilean(cfg.weighted_beta, at), ctx.zeta.get());
    }
    traj.observables.push_back(s);
    traj.fields.push_back(u);
  };

  auto maybe_record = [&](double at) {
    for (double st : cfg.sample_times)
      if (std::abs(st - at) <= 1e-12 * std::max(1.0, std::abs(st))) {
        record(at);
        return;
      }
  };

  maybe_record(t);
  std::size_t next_stop = 0;
  while (next_stop < stops.size() && dir * (stops[next_stop] - t) <= 1e-13) ++next_stop;

  while (dir * (cfg.t_end - t) > 1e-13 * std::max(1.0, std::abs(cfg.t_end))) {
    double h = cfg.dt;
    // halve near the sigma kink and across the origin
    if (model.kind == SigmaKind::PaperExample &&
        std::abs(std::abs(t) - model.r1) < 5.0 * cfg.dt)
      h *= 0.5;
    if (std::abs(t) < 5.0 * cfg.dt) h *= 0.5;
    if (next_stop < stops.size()) h = std::min(h, std::abs(stops[next_stop] - t));
    h = std::min(h, std::abs(cfg.t_end - t));
    double hs = dir * h;
    double t_mid = t + 0.5 * hs;

    if (cfg.scheme == Scheme::Strang) {
      double w1, w2;  // integrated potential weights of the two halves
      if (cfg.potential_mode == PotentialMode::ExactQuadraticSubstep) {
        w1 = model.integral(t, t_mid);
        w2 = model.integral(t_mid, t + hs);
      } else {
        w1 = w2 = model(t_mid) * 0.5 * hs;
      }
      pointwise_phase_step(u, x_sq, w1, cfg.eta, cfg.p_c, 0.5 * hs);
      detail::kinetic_step(u, hs, kin);
      pointwise_phase_step(u, x_sq, w2, cfg.eta, cfg.p_c, 0.5 * hs);
    } else {
      double w = cfg.potential_mode == PotentialMode::ExactQuadraticSubstep
                     ? model.integral(t, t + hs)
                     : model(t_mid) * hs;
      pointwise_phase_step(u, x_sq, w, cfg.eta, cfg.p_c, hs);
      detail::kinetic_step(u, hs, kin);
    }

    t += hs;
    u.time = t;
    require(u.norm_linf() <= cfg.blowup_factor * linf0, ErrorKind::BlowupDetected,
            "||u||_inf grew past the collapse guard");
    if (next_stop < stops.size() &&
        std::abs(t - stops[next_stop]) <= 1e-12 * std::max(1.0, std::abs(t))) {
      t = stops[next_stop];
      u.time = t;
      maybe_record(t);
      ++next_stop;
      while (next_stop < stops.size() && dir * (stops[next_stop] - t) <= 1e-13) ++next_stop;
    }
  }
  traj.final_field = u;
  traj.final_field.time = cfg.t_end;
  return traj;
}

struct BridgeResult {
  Field field;
  double weighted_in = std::numeric_limits<double>::quiet_NaN();
  double weighted_out = std::numeric_limits<double>::quiet_NaN();
  double a0 = std::numeric_limits<double>::quiet_NaN();  // measured growth factor
};

// Nonlinear propagation across the window where the factorization may
// degenerate (zeta2 can vanish inside [-r0, r0]); endpoints in either order.
// Reports the Galilean-weighted norm growth factor between the endpoints.
inline BridgeResult bridge(const PropagatorContext& ctx, EvolveConfig cfg, const Field& u_at,
                           double from, double to) {
  double r0 = ctx.r0() * (1.0 + 1e-9);
  require(std::abs(from) <= r0 && std::abs(to) <= r0, ErrorKind::OutsideValidity,
          "bridge endpoints must lie in [-r0, r0]");
  cfg.t_begin = from;
  cfg.t_end = to;
  cfg.sample_times.clear();
  BridgeResult out;
  double beta = cfg.weighted_beta;
  auto weighted_at = [&](const Field& f, double at) {
    if (beta <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (at != 0.0 && std::abs(at) < ctx.r0() * (1.0 - 1e-12))
      return std::numeric_limits<double>::quiet_NaN();
    return norm(f, NormSpec::galilean(beta, at), ctx.zeta.get());
  };
  out.weighted_in = weighted_at(u_at, from);
  Trajectory traj = evolve(ctx, cfg, u_at);
  out.field = traj.final_field;
  out.weighted_out = weighted_at(out.field, to);
  out.a0 = out.weighted_out / out.weighted_in;
  return out;
}

}  // namespace tdho
