#pragma once

#include <cmath>

#include "tdho/profile.hpp"
#include "tdho/propagator.hpp"

namespace tdho {

// Pieces of the external term E(t) = A(t) + E_r(t) of the final-state
// integral equation, evaluated at one time for the decay sweeps:
//   a_factor    = c_+ |t| / |zeta2(t)|^{1/(1-lambda)} - 1   (identically 0 when
//                 zeta2 is exactly linear, i.e. the free model)
//   A_t         = a_factor * F(w_hat(t)) / (c_+ |t|)    (frequency side)
//   Er_t        = R(t) F(w_hat(t)) / (c_+ |t|)          (physical side)
//   R_norm      = || R(t) w_hat(t) ||_2
struct RemainderTerms {
  Field A_t;
  Field Er_t;
  double R_norm = 0.0;
  double a_factor = 0.0;
};

inline double remainder_a_factor(const PropagatorContext& ctx, double t) {
  auto v = ctx.zeta_at(t);
  double c_plus = ctx.params.c_plus_at(t);
  return c_plus * std::abs(t) / std::pow(std::abs(v.z2), 1.0 / (1.0 - ctx.params.lambda)) - 1.0;
}

inline RemainderTerms remainder_terms(const PropagatorContext& ctx, const FinalDatum& datum,
                                      double t) {
  require(std::abs(t) >= ctx.r0() * (1.0 - 1e-12), ErrorKind::OutsideValidity,
          "remainder terms defined for |t| >= r0");
  RemainderTerms out;
  Field what = profile_w_hat(ctx, datum, t);
  Field fw = gauge_nonlinearity(what, datum.eta, ctx.params.p_c);
  double c_plus = ctx.params.c_plus_at(t);
  out.a_factor = remainder_a_factor(ctx, t);
  out.A_t = fw;
  out.A_t *= out.a_factor / (c_plus * std::abs(t));
  out.Er_t = apply_R(ctx, fw, t);
  out.Er_t *= 1.0 / (c_plus * std::abs(t));
  out.R_norm = r_remainder_norm(ctx, what, t);
  return out;
}

}  // namespace tdho
