#pragma once

#include <cmath>
#include <string>

#include "tdho/errors.hpp"
#include "tdho/propagator.hpp"

namespace tdho {

// eta |f|^{p_c} f, pointwise on whatever side the samples live.
inline Field gauge_nonlinearity(const Field& f, double eta, double p_c) {
  Field out = f;
  for (Complex& v : out.values) {
    double amp = std::abs(v);
    v *= eta * std::pow(std::max(amp, 1e-300), p_c);
  }
  return out;
}

// Exponent chain shared by the final-state and extraction stages.
inline void validate_exponent_chain(int d, double p_c, double alpha, double beta, double delta) {
  double top = std::min(static_cast<double>(d), 1.0 + p_c);
  bool ok = (0.5 * d < delta) && (delta < beta) && (beta < alpha) && (alpha < top);
  if (!ok) {
    fail(ErrorKind::ConfigInvalid,
         "exponent chain must satisfy d/2 < delta < beta < alpha < min(d, 1+p_c); got "
         "delta=" + format_g17(delta) + " beta=" + format_g17(beta) +
         " alpha=" + format_g17(alpha) + " with d/2=" + format_g17(0.5 * d) +
         " min(d,1+p_c)=" + format_g17(top));
  }
}

// Scattering datum with its regularity bookkeeping. phase_sign switches the
// orientation of the logarithmic phase correction in the profile (the two
// conventions in circulation differ by this sign; +1 is the default).
struct FinalDatum {
  Field u_minus;  // physical side
  double alpha = 0.85;
  double beta = 0.7;
  double delta = 0.6;
  double eta = 0.0;
  double epsilon = 0.0;  // ||u_minus||_{H^{0,alpha}}, recorded at construction
  int phase_sign = +1;
};

inline FinalDatum make_final_datum(const PropagatorContext& ctx, const Field& u_minus,
                                   double alpha, double beta, double delta, double eta,
                                   int phase_sign = +1) {
  validate_exponent_chain(ctx.grid.d, ctx.params.p_c, alpha, beta, delta);
  require(u_minus.gauge == Gauge::Physical, ErrorKind::ShapeMismatch,
          "datum must be physical-side");
  require(u_minus.grid == ctx.grid, ErrorKind::ShapeMismatch, "datum grid mismatch");
  FinalDatum datum;
  datum.u_minus = u_minus;
  datum.alpha = alpha;
  datum.beta = beta;
  datum.delta = delta;
  datum.eta = eta;
  datum.phase_sign = phase_sign;
  datum.epsilon = weighted_l2_norm(u_minus, alpha);
  return datum;
}

// w_hat(t) = F[u_minus] . exp(i (eta/c_+) |F[u_minus]|^{p_c} log|t|): the
// frequency-side profile datum with the logarithmic phase correction.
inline Field profile_w_hat(const PropagatorContext& ctx, const FinalDatum& datum, double t) {
  Field hat = fourier(datum.u_minus, FourierDirection::Forward);
  if (datum.eta != 0.0) {
    double coef = datum.phase_sign * datum.eta / ctx.params.c_plus_at(t) *
                  std::log(std::abs(t));
    for (Complex& v : hat.values) {
      double ph = coef * std::pow(std::abs(v), ctx.params.p_c);
      v *= Complex(std::cos(ph), std::sin(ph));
    }
  }
  hat.time = t;
  return hat;
}

// Asymptotic profile u_p(t) = M(zeta2/zeta2') D(zeta2) w_hat(t); every factor
// is unitary, so ||u_p(t)||_2 = ||u_minus||_2.
inline Field profile_up(const PropagatorContext& ctx, const FinalDatum& datum, double t) {
  require(std::abs(t) >= ctx.r0() * (1.0 - 1e-12), ErrorKind::OutsideValidity,
          "profile defined for |t| >= r0");
  Field what = profile_w_hat(ctx, datum, t);
  Field g = fourier(what, FourierDirection::Inverse);
  Field out = detail::forward_chain(ctx, g, t, 0.0);
  out.time = t;
  return out;
}

}  // namespace tdho
