#pragma once

#include <limits>

#include "tdho/evolve.hpp"
#include "tdho/extract.hpp"
#include "tdho/final_state.hpp"
#include "tdho/profile.hpp"

namespace tdho {

struct PipelineConfig {
  FinalStateConfig final_state;
  ExtractConfig extract;
  double bridge_dt = 1e-4;
  double eps_max = 0.1;          // smallness threshold for the datum
  double handoff_eps_max = 1.0;  // cap on the weighted handoff norms
  Scheme scheme = Scheme::Strang;
  PotentialMode potential_mode = PotentialMode::Pointwise;
};

// The full three-stage run and its stage bookkeeping: the wave-operator image
// u(0), the handoff u(r0), and the scattered datum u_+ = v_p(T_end), along
// with every stage norm needed for the smallness chain.
struct PipelineResult {
  Field u0;
  Field u_r0;
  Field u_plus;
  FinalStateResult final_state;
  BridgeResult bridge_neg;  // -r0 -> 0
  BridgeResult bridge_pos;  // 0 -> r0
  ScatterResult extract;
  double u0_weighted = 0.0;      // ||u(0)||_{H^{0,beta}}
  double c0_measured = 0.0;      // u0_weighted / epsilon
  double u_plus_weighted = 0.0;  // ||u_+||_{H^{0,delta}}
};

// Final-state solve on (-inf, -r0], persistence bridge across [-r0, r0],
// forward extraction on [r0, T_end).
inline PipelineResult compose_scattering(const PropagatorContext& ctx, const FinalDatum& datum,
                                         const PipelineConfig& cfg) {
  require(datum.epsilon <= cfg.eps_max, ErrorKind::SmallnessViolated,
          "final-state stage: ||u_-||_{H^{0,alpha}} exceeds the configured threshold");

  PipelineResult out;
  FinalStateConfig fs = cfg.final_state;
  fs.scheme = cfg.scheme;
  fs.potential_mode = cfg.potential_mode;
  out.final_state = final_state_solve(ctx, datum, fs);

  EvolveConfig bcfg;
  bcfg.eta = datum.eta;
  bcfg.p_c = ctx.params.p_c;
  bcfg.dt = cfg.bridge_dt;
  bcfg.scheme = cfg.scheme;
  bcfg.potential_mode = cfg.potential_mode;
  bcfg.weighted_beta = datum.beta;

  double r0 = ctx.r0();
  out.bridge_neg = bridge(ctx, bcfg, out.final_state.u_at_stop, -r0, 0.0);
  out.u0 = out.bridge_neg.field;
  out.u0_weighted = weighted_l2_norm(out.u0, datum.beta);
  out.c0_measured = datum.epsilon > 0.0 ? out.u0_weighted / datum.epsilon
                                        : std::numeric_limits<double>::quiet_NaN();
  require(out.u0_weighted <= cfg.handoff_eps_max, ErrorKind::SmallnessViolated,
          "bridge stage: ||u(0)||_{H^{0,beta}} exceeds the handoff cap");

  out.bridge_pos = bridge(ctx, bcfg, out.u0, 0.0, r0);
  out.u_r0 = out.bridge_pos.field;

  ExtractConfig ex = cfg.extract;
  ex.eta = datum.eta;
  ex.delta = datum.delta;
  ex.beta = datum.beta;
  ex.scheme = cfg.scheme;
  ex.potential_mode = cfg.potential_mode;
  out.extract = forward_extract(ctx, out.u_r0, ex);
  require(out.extract.handoff_weighted <= cfg.handoff_eps_max, ErrorKind::SmallnessViolated,
          "extraction stage: ||U(0,r0) u(r0)||_{H^{0,beta}} exceeds the handoff cap");
  out.u_plus = out.extract.u_plus;
  out.u_plus_weighted = weighted_l2_norm(out.u_plus, datum.delta);
  return out;
}

}  // namespace tdho
