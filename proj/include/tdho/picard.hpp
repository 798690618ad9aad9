#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tdho/final_state.hpp"
#include "tdho/profile.hpp"
#include "tdho/remainder.hpp"
#include "tdho/xb_norm.hpp"

namespace tdho {

// Contraction-space exponent: half the tightest of the constraints the
// external-term estimates impose.
inline double default_b_exponent(const AsymptoticParams& params, double alpha, double beta) {
  double one_m2l = 1.0 - 2.0 * params.lambda;
  double b1 = (1.0 - 0.5 * beta) * one_m2l;
  double b2 = 0.5 * (alpha - beta) * one_m2l;
  return 0.5 * std::min(b1, b2);
}

// One trajectory iterate on the fixed node grid, kept in both representations:
// v(t) (physical, what the nonlinearity sees) and U(0,t) v(t) (what the
// weighted norms see).
struct PicardIterate {
  std::vector<Field> v;
  std::vector<Field> v_hat;  // U(0, t_i) v(t_i), physical-side samples at time 0
};

// The map Psi of the final-state integral equation on a log-spaced node grid
// covering [t_start, -r0]:
//   Psi(v)(t) = -i Int_{t_start}^{t} U(t,s) (F(u_p+v) - F(u_p)) ds + E(t).
// U(t,s) = U(t,0) U(0,s) lets every integral accumulate as a prefix sum in the
// U(0,.)-representation, so one sweep costs two factor chains per node. The
// truncated tail Int_{-inf}^{t_start} is estimated from the integrand's
// fitted decay and reported, never silently dropped.
class PicardOperator {
 public:
  PicardOperator(const PropagatorContext& ctx, const FinalDatum& datum, double t_start,
                 int nodes_per_decade = 48)
      : ctx_(ctx), datum_(datum) {
    require(nodes_per_decade >= 8, ErrorKind::QuadratureUnderflow,
            "node grid too coarse to resolve the log kernel");
    double r0 = ctx.r0();
    require(t_start <= -10.0 * r0, ErrorKind::OutsideValidity, "t_start must be <= -10 r0");
    // increasing in time: t_start .. -r0
    ts_ = log_spaced_times(std::abs(t_start), r0, nodes_per_decade, -1.0);

    const std::size_t m = ts_.size();
    up_.reserve(m);
    e_hat_.reserve(m);
    std::vector<Field> a_integrand(m, Field(ctx.grid));
    std::vector<Field> er_integrand(m, Field(ctx.grid));
    std::vector<double> a_norms(m), er_norms(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = ts_[i];
      auto v = ctx.zeta_at(s);
      double inner_rate = v.z1 / v.z2;
      double c_plus = ctx.params.c_plus_at(s);
      Field what = profile_w_hat(ctx, datum, s);
      up_.push_back(profile_up(ctx, datum, s));
      Field fw = gauge_nonlinearity(what, datum.eta, ctx.params.p_c);
      Field fw_phys = fourier(fw, FourierDirection::Inverse);
      // A-integrand: M2^{-1} M_+^{-1} F^{-1} (a_factor F(w_hat)) / (c_+|s|);
      // the combined chirp M_+ M2 is exactly the inner factor M(zeta2/zeta1)
      double a_fac = remainder_a_factor(ctx, s);
      Field ga = chirp_rate(fw_phys, -inner_rate);
      ga *= a_fac / (c_plus * std::abs(s));
      // E_r integrand pulled back: U(0,s) R(s) F(w_hat) / (c_+|s|)
      //   = M2^{-1} M_+^{-1} (M2 - 1) F^{-1} F(w_hat) / (c_+|s|)
      double m2r = m2_rate(v, ctx.params.tail(s));
      Field gr = chirp_rate(fw_phys, m2r);
      gr -= fw_phys;
      gr = chirp_rate(gr, -inner_rate);
      gr *= 1.0 / (c_plus * std::abs(s));
      a_norms[i] = ga.norm_l2();
      er_norms[i] = gr.norm_l2();
      a_integrand[i] = std::move(ga);
      er_integrand[i] = std::move(gr);
    }
    // E_hat(t_i) = -i P[a](t_i) + i P[er](t_i) + U(0,t_i) R(t_i) w_hat(t_i)
    Field acc_a(ctx.grid), acc_er(ctx.grid);
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) {
        double h = ts_[i] - ts_[i - 1];
        Field inc_a = a_integrand[i] + a_integrand[i - 1];
        inc_a *= 0.5 * h;
        acc_a += inc_a;
        Field inc_er = er_integrand[i] + er_integrand[i - 1];
        inc_er *= 0.5 * h;
        acc_er += inc_er;
      }
      double s = ts_[i];
      auto v = ctx.zeta_at(s);
      Field what = profile_w_hat(ctx, datum, s);
      Field wp = fourier(what, FourierDirection::Inverse);
      Field rw = chirp_rate(wp, m2_rate(v, ctx.params.tail(s)));
      rw -= wp;
      rw = chirp_rate(rw, -v.z1 / v.z2);  // U(0,t) R(t) w_hat
      Field eh = rw;
      Field tmp = acc_a;
      tmp *= Complex(0.0, -1.0);
      eh += tmp;
      tmp = acc_er;
      tmp *= Complex(0.0, 1.0);
      eh += tmp;
      eh.time = 0.0;
      e_hat_.push_back(eh);
    }
    // truncation of the (-inf, t_start] tail from the integrands' decay
    tail_report_ = estimate_tail(a_norms, er_norms);
  }

  const std::vector<double>& times() const { return ts_; }
  const std::vector<Field>& profiles() const { return up_; }
  double tail_bound() const { return tail_report_; }

  PicardIterate zero_iterate() const {
    PicardIterate it;
    it.v.assign(ts_.size(), Field(ctx_.grid));
    it.v_hat.assign(ts_.size(), Field(ctx_.grid));
    return it;
  }

  // One application of Psi.
  PicardIterate apply(const PicardIterate& v) const {
    const std::size_t m = ts_.size();
    PicardIterate out;
    out.v.reserve(m);
    out.v_hat.reserve(m);
    Field acc(ctx_.grid);
    Field prev(ctx_.grid);
    for (std::size_t i = 0; i < m; ++i) {
      double s = ts_[i];
      Field sum = up_[i] + v.v[i];
      Field g = gauge_nonlinearity(sum, datum_.eta, ctx_.params.p_c) -
                gauge_nonlinearity(up_[i], datum_.eta, ctx_.params.p_c);
      auto zv = ctx_.zeta_at(s);
      Field q = detail::inverse_chain(ctx_, g, s, zv.z1 / zv.z2);
      if (i > 0) {
        double h = ts_[i] - ts_[i - 1];
        Field inc = q + prev;
        inc *= 0.5 * h;
        acc += inc;
      }
      prev = q;
      Field psi_hat = acc;
      psi_hat *= Complex(0.0, -1.0);
      psi_hat += e_hat_[i];
      psi_hat.time = 0.0;
      Field psi = detail::forward_chain(ctx_, psi_hat, s, zv.z1 / zv.z2);
      psi.time = s;
      out.v_hat.push_back(std::move(psi_hat));
      out.v.push_back(std::move(psi));
    }
    return out;
  }

  // sup_t L2 distance: the weak metric of the contraction space.
  static double metric(const PicardIterate& a, const PicardIterate& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i)
      sup = std::max(sup, distance_l2(a.v[i], b.v[i]));
    return sup;
  }

  double xb_of(const PicardIterate& it, double b_exp) const {
    std::vector<WeightedSample> samples(ts_.size());
    for (std::size_t i = 0; i < ts_.size(); ++i) {
      samples[i].t = ts_[i];
      samples[i].l2 = it.v[i].norm_l2();
      samples[i].weighted = weighted_l2_norm(it.v_hat[i], datum_.beta);
    }
    return xb_norm(samples, datum_.beta, b_exp, ctx_.params.lambda, ctx_.r0());
  }

 private:
  double estimate_tail(const std::vector<double>& a_norms,
                       const std::vector<double>& er_norms) const {
    // fit the decay over the first decade (most negative times) and integrate
    // the fitted power beyond t_start
    std::vector<double> at, av;
    double t0 = std::abs(ts_.front());
    for (std::size_t i = 0; i < ts_.size(); ++i) {
      double a = std::abs(ts_[i]);
      if (a < t0 / 10.0) break;
      double v = a_norms[i] + er_norms[i];
      if (v > 0) {
        at.push_back(a);
        av.push_back(v);
      }
    }
    if (at.size() < 4) return 0.0;
    std::reverse(at.begin(), at.end());
    std::reverse(av.begin(), av.end());
    RateFit fit = fit_power_law(at, av);
    if (fit.mu <= 1.01) return std::numeric_limits<double>::infinity();
    double v0 = av.back();
    return v0 * t0 / (fit.mu - 1.0);
  }

  const PropagatorContext& ctx_;
  FinalDatum datum_;
  std::vector<double> ts_;
  std::vector<Field> up_;
  std::vector<Field> e_hat_;
  double tail_report_ = 0.0;
};

// spec-facing single step: one application of Psi to a trajectory sampled on
// the operator's node grid.
inline PicardIterate picard_step(const PicardOperator& op, const PicardIterate& v) {
  return op.apply(v);
}

struct PicardRunResult {
  std::vector<double> residuals;  // d(v_{k+1}, v_k)
  std::vector<double> kappas;     // successive contraction ratios
  double kappa = 0.0;             // last measured ratio
  double relative_residual = 0.0;
  int iterations = 0;
  double xb_external = 0.0;  // X_b norm of E = Psi(0)
  double b_exponent = 0.0;
  double tail_bound = 0.0;
  PicardIterate fixed_point;
};

inline PicardRunResult picard_solve(const PropagatorContext& ctx, const FinalDatum& datum,
                                    double t_start, int nodes_per_decade = 48, int max_iter = 8,
                                    double rel_tol = 1e-4) {
  PicardOperator op(ctx, datum, t_start, nodes_per_decade);
  PicardRunResult out;
  out.b_exponent = default_b_exponent(ctx.params, datum.alpha, datum.beta);
  out.tail_bound = op.tail_bound();
  PicardIterate v = op.zero_iterate();
  PicardIterate next = op.apply(v);  // Psi(0) = E
  out.xb_external = op.xb_of(next, out.b_exponent);
  double d1 = PicardOperator::metric(next, v);
  double d_prev = d1;
  v = std::move(next);
  for (int k = 1; k <= max_iter; ++k) {
    next = op.apply(v);
    double d = PicardOperator::metric(next, v);
    out.residuals.push_back(d);
    if (d_prev > 0.0) {
      out.kappas.push_back(d / d_prev);
      out.kappa = d / d_prev;
    }
    out.relative_residual = d1 > 0.0 ? d / d1 : 0.0;
    out.iterations = k;
    v = std::move(next);
    d_prev = d;
    if (out.relative_residual <= rel_tol) break;
  }
  out.fixed_point = std::move(v);
  return out;
}

}  // namespace tdho
