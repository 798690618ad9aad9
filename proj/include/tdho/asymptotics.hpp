#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/rate_fit.hpp"
#include "tdho/sigma.hpp"
#include "tdho/zeta.hpp"

namespace tdho {

// Tail coefficients of one time direction: zeta2 ~ a2 |t|^{1-lambda},
// zeta1/zeta2 -> a1/a2. For even sigma, zeta2 is odd, so the two directions
// carry opposite-sign a2; everything downstream selects the branch by the
// sign of the query time.
struct TailCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double a1_residual = 0.0;  // RMS relative residual of the two-term fit
  double a2_residual = 0.0;
};

struct AsymptoticParams {
  int d = 1;
  double lambda = 0.0;
  double a1 = 0.0;  // positive-branch values (t -> +inf)
  double a2 = 1.0;
  TailCoefficients tail_pos;
  TailCoefficients tail_neg;
  double delta0 = 0.0;
  double r0 = 1.0;
  double c_plus = 1.0;  // |a2|^{1/(1-lambda)}, positive branch
  double p_c = 2.0;
  // decay-rate diagnostics of the tail residual |zeta2/|t|^{1-lambda} - a2|;
  // exponent is +inf when the residual is at round-off (exact tail)
  double k13_exponent = std::numeric_limits<double>::infinity();
  double k13_fit_residual = 0.0;

  const TailCoefficients& tail(double t) const { return t < 0.0 ? tail_neg : tail_pos; }
  double a1_at(double t) const { return tail(t).a1; }
  double a2_at(double t) const { return tail(t).a2; }
  double c_plus_at(double t) const {
    return std::pow(std::abs(tail(t).a2), 1.0 / (1.0 - lambda));
  }
  // chirp rate of the limiting inner factor: exponent i|x|^2 * rate / 2
  double mplus_rate(double t) const { return tail(t).a1 / tail(t).a2; }
};

namespace detail {

// Least squares for y ~ a |t|^{1-lambda} + b |t|^lambda on given nodes.
struct TwoTermFit {
  double a = 0.0, b = 0.0, rms_rel = 0.0;
};

inline TwoTermFit fit_two_term(const std::vector<double>& ts, const std::vector<double>& ys,
                               double lambda) {
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double p1 = std::pow(std::abs(ts[i]), 1.0 - lambda);
    double p2 = std::pow(std::abs(ts[i]), lambda);
    s11 += p1 * p1;
    s12 += p1 * p2;
    s22 += p2 * p2;
    r1 += p1 * ys[i];
    r2 += p2 * ys[i];
  }
  double det = s11 * s22 - s12 * s12;
  require(std::abs(det) > 1e-300, ErrorKind::FitFailed, "degenerate two-term fit");
  TwoTermFit fit;
  fit.a = (s22 * r1 - s12 * r2) / det;
  fit.b = (s11 * r2 - s12 * r1) / det;
  double ss = 0, sy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double p1 = std::pow(std::abs(ts[i]), 1.0 - lambda);
    double p2 = std::pow(std::abs(ts[i]), lambda);
    double e = ys[i] - fit.a * p1 - fit.b * p2;
    ss += e * e;
    sy += ys[i] * ys[i];
  }
  fit.rms_rel = sy > 0 ? std::sqrt(ss / sy) : 0.0;
  return fit;
}

// For table models the exponent is unknown; minimize the two-term residual of
// zeta2 over lambda by golden-section on top of a coarse log-log slope guess.
inline double fit_lambda(const std::vector<double>& ts, const std::vector<double>& z2s) {
  std::vector<double> at, av;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(z2s[i]) > 0) {
      at.push_back(std::abs(ts[i]));
      av.push_back(std::abs(z2s[i]));
    }
  }
  RateFit coarse = fit_power_law(at, av);
  double guess = 1.0 + coarse.mu;  // value grows like t^{1-lambda}: mu = -(1-lambda)
  double lo = std::max(-2.0, guess - 0.2), hi = std::min(0.499, guess + 0.2);
  auto cost = [&](double lam) { return fit_two_term(ts, z2s, lam).rms_rel; };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      hi = d; d = c; fd = fc;
      c = hi - gr * (hi - lo);
      fc = cost(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + gr * (hi - lo);
      fd = cost(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Reads off lambda, the branch tail coefficients, the admissible radius r0 and
// the lower envelope delta0 from a computed fundamental system.
inline AsymptoticParams extract_asymptotics(const ZetaSolution& zeta, const SigmaModel& model,
                                            int d) {
  require(d >= 1 && d <= 3, ErrorKind::InvalidModel, "d must be 1, 2 or 3");
  double t_max = zeta.t_max();
  double r1 = model.kind == SigmaKind::PaperExample ? model.r1 : 1.0;
  require(t_max >= 10.0 * r1, ErrorKind::OutsideValidity,
          "zeta grid must cover at least 10*r1");

  // outer decade of the positive branch
  std::vector<double> ts_pos, z2_pos, z1_pos, ts_neg, z2_neg, z1_neg;
  for (std::size_t i = 0; i < zeta.times.size(); ++i) {
    double t = zeta.times[i];
    if (t >= t_max / 10.0) {
      ts_pos.push_back(t);
      z2_pos.push_back(zeta.z2[i]);
      z1_pos.push_back(zeta.z1[i]);
    }
    if (t <= -t_max / 10.0) {
      ts_neg.push_back(t);
      z2_neg.push_back(zeta.z2[i]);
      z1_neg.push_back(zeta.z1[i]);
    }
  }
  require(ts_pos.size() >= 8 && ts_neg.size() >= 8, ErrorKind::InsufficientSamples,
          "outer decade too sparse");

  AsymptoticParams params;
  params.d = d;
  switch (model.kind) {
    case SigmaKind::Zero:
      params.lambda = 0.0;
      break;
    case SigmaKind::PaperExample:
      params.lambda = lambda_from_sigma1(model.sigma1);
      break;
    case SigmaKind::Table:
      params.lambda = detail::fit_lambda(ts_pos, z2_pos);
      break;
  }
  require(params.lambda < 0.5, ErrorKind::AssumptionViolated, "lambda must be < 1/2");
  if (d == 3)
    require(params.lambda > -1.0 / 3.0, ErrorKind::AssumptionViolated,
            "d=3 requires lambda > -1/3");

  auto fit_branch = [&](const std::vector<double>& ts, const std::vector<double>& z2s,
                        const std::vector<double>& z1s) {
    TailCoefficients tc;
    auto f2 = detail::fit_two_term(ts, z2s, params.lambda);
    auto f1 = detail::fit_two_term(ts, z1s, params.lambda);
    tc.a2 = f2.a;
    tc.a1 = f1.a;
    tc.a2_residual = f2.rms_rel;
    tc.a1_residual = f1.rms_rel;
    return tc;
  };
  params.tail_pos = fit_branch(ts_pos, z2_pos, z1_pos);
  params.tail_neg = fit_branch(ts_neg, z2_neg, z1_neg);
  require(params.tail_pos.a2 != 0.0 && params.tail_neg.a2 != 0.0, ErrorKind::AssumptionViolated,
          "a2 must be nonzero");
  params.a1 = params.tail_pos.a1;
  params.a2 = params.tail_pos.a2;
  params.c_plus = std::pow(std::abs(params.a2), 1.0 / (1.0 - params.lambda));
  params.p_c = 2.0 / (d * (1.0 - params.lambda));

  // smallest grid radius >= max(1, r1) where the envelope bound and the
  // half-window condition hold with 10% margin on both branches
  double r_min = std::max(1.0, r1);
  auto admissible_from = [&](double r) {
    for (std::size_t i = 0; i < zeta.times.size(); ++i) {
      double t = zeta.times[i];
      if (std::abs(t) < r || std::abs(t) > t_max) continue;
      double a2b = params.tail(t).a2;
      double env = std::pow(std::abs(t), 1.0 - params.lambda);
      if (std::abs(zeta.z2[i]) < 0.1 * std::abs(a2b) * env) return false;
      if (std::abs(zeta.z2[i] / env - a2b) > 0.45 * std::abs(a2b)) return false;
    }
    return true;
  };
  double r0 = -1.0;
  for (std::size_t i = 0; i < zeta.times.size(); ++i) {
    double t = zeta.times[i];
    if (t < r_min || t > t_max / 10.0) continue;  // leave the outer decade for the fits
    if (admissible_from(t)) {
      r0 = t;
      break;
    }
  }
  require(r0 > 0.0, ErrorKind::AssumptionViolated,
          "no admissible r0: |zeta2| does not stay within the tail envelope");
  params.r0 = r0;

  double delta0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < zeta.times.size(); ++i)
    if (std::abs(zeta.times[i]) >= r0) delta0 = std::min(delta0, std::abs(zeta.z2[i]));
  params.delta0 = delta0;

  // residual decay rate of the positive tail
  std::vector<double> rt, rv;
  for (std::size_t i = 0; i < zeta.times.size(); ++i) {
    double t = zeta.times[i];
    if (t < std::max(2.0 * r0, t_max / 100.0)) continue;
    double res = std::abs(zeta.z2[i] / std::pow(t, 1.0 - params.lambda) - params.a2);
    if (res > 1e-12 * std::abs(params.a2)) {
      rt.push_back(t);
      rv.push_back(res);
    }
  }
  if (rt.size() >= 6) {
    RateFit fit = fit_power_law(rt, rv);
    params.k13_exponent = fit.mu;
    params.k13_fit_residual = fit.residual;
  }
  return params;
}

// |M2(t, x) - 1| where M2 carries the decaying part of the inner chirp:
// M2(t) = exp(i |x|^2 (a2 zeta1 - a1 zeta2) / (2 a2 zeta2)), with the branch
// pair of sign(t). Tends to 1 pointwise as |t| grows.
inline double m2_deviation(const ZetaSolution& zeta, const AsymptoticParams& params, double t,
                           double x_sq) {
  require(std::abs(t) >= params.r0, ErrorKind::OutsideValidity, "need |t| >= r0");
  auto v = zeta.eval(t);
  const TailCoefficients& tc = params.tail(t);
  double num = tc.a2 * v.z1 - tc.a1 * v.z2;
  double scale = std::abs(tc.a2 * v.z1) + std::abs(tc.a1 * v.z2);
  require(std::abs(num) > 1e-14 * scale, ErrorKind::DegenerateDenominator,
          "a2*zeta1 - a1*zeta2 vanishes at t");
  double rate = num / (tc.a2 * v.z2);  // = zeta1/zeta2 - a1/a2
  return 2.0 * std::abs(std::sin(0.25 * x_sq * rate));
}

// Chirp rate of M2(t): the exponent is i|x|^2 * rate / 2.
inline double m2_rate(const ZetaSolution::Values& v, const TailCoefficients& tc) {
  return v.z1 / v.z2 - tc.a1 / tc.a2;
}

}  // namespace tdho
