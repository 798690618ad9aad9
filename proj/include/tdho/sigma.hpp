#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tdho/csv.hpp"
#include "tdho/errors.hpp"

namespace tdho {

enum class SigmaKind { Zero, PaperExample, Table };

// Coefficient sigma(t) of the quadratic potential sigma(t)|x|^2/2.
//
// PaperExample is the piecewise family: constant sigma0 inside |t| < r1,
// inverse-square tail sigma1 |t|^-2 outside. Table interpolates user samples
// linearly. sigma1 < 1/4 always (the tail indicial roots must be real and
// distinct).
struct SigmaModel {
  SigmaKind kind = SigmaKind::Zero;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  double r1 = 1.0;
  std::vector<double> table_t;
  std::vector<double> table_sigma;

  static SigmaModel zero() { return SigmaModel{}; }

  static SigmaModel paper_example(double sigma0, double sigma1, double r1) {
    require(sigma1 < 0.25, ErrorKind::InvalidModel, "sigma1 must be < 1/4");
    require(r1 > 0.0, ErrorKind::InvalidModel, "r1 must be positive");
    require(sigma0 > 0.0, ErrorKind::InvalidModel, "sigma0 must be positive");
    SigmaModel m;
    m.kind = SigmaKind::PaperExample;
    m.sigma0 = sigma0;
    m.sigma1 = sigma1;
    m.r1 = r1;
    return m;
  }

  static SigmaModel table(std::vector<double> t, std::vector<double> sigma) {
    require(t.size() == sigma.size() && t.size() >= 2, ErrorKind::InvalidModel,
            "table needs >= 2 matched samples");
    for (std::size_t i = 1; i < t.size(); ++i)
      require(t[i] > t[i - 1], ErrorKind::InvalidModel, "table t must be strictly increasing");
    SigmaModel m;
    m.kind = SigmaKind::Table;
    m.table_t = std::move(t);
    m.table_sigma = std::move(sigma);
    return m;
  }

  // CSV with header `t,sigma`, strictly increasing t.
  static SigmaModel from_csv(const std::string& path) {
    CsvTable tab = read_csv(path);
    int ct = tab.column("t"), cs = tab.column("sigma");
    require(ct >= 0 && cs >= 0, ErrorKind::Io, "sigma csv needs columns t,sigma");
    std::vector<double> t, s;
    t.reserve(tab.rows.size());
    s.reserve(tab.rows.size());
    for (const auto& row : tab.rows) {
      t.push_back(row[ct]);
      s.push_back(row[cs]);
    }
    return table(std::move(t), std::move(s));
  }

  double operator()(double t) const {
    switch (kind) {
      case SigmaKind::Zero:
        return 0.0;
      case SigmaKind::PaperExample:
        return std::abs(t) < r1 ? sigma0 : sigma1 / (t * t);
      case SigmaKind::Table: {
        require(t >= table_t.front() && t <= table_t.back(), ErrorKind::NonConvergent,
                "sigma table does not cover t=" + std::to_string(t));
        auto it = std::upper_bound(table_t.begin(), table_t.end(), t);
        if (it == table_t.begin()) return table_sigma.front();
        if (it == table_t.end()) return table_sigma.back();
        std::size_t hi = static_cast<std::size_t>(it - table_t.begin());
        std::size_t lo = hi - 1;
        double w = (t - table_t[lo]) / (table_t[hi] - table_t[lo]);
        return (1.0 - w) * table_sigma[lo] + w * table_sigma[hi];
      }
    }
    return 0.0;
  }

  // Exact integral over [a, b]; used by the exact-quadratic potential substep.
  double integral(double a, double b) const {
    if (a > b) return -integral(b, a);
    switch (kind) {
      case SigmaKind::Zero:
        return 0.0;
      case SigmaKind::PaperExample: {
        // antiderivative of the piecewise model from 0
        auto prim = [this](double t) {
          double s = std::abs(t);
          double v = (s <= r1) ? sigma0 * s : sigma0 * r1 + sigma1 * (1.0 / r1 - 1.0 / s);
          return t >= 0 ? v : -v;
        };
        return prim(b) - prim(a);
      }
      case SigmaKind::Table: {
        // trapezoid on the table nodes restricted to [a, b]
        double acc = 0.0;
        double prev_t = a, prev_v = (*this)(a);
        for (std::size_t i = 0; i < table_t.size(); ++i) {
          double tt = table_t[i];
          if (tt <= a || tt >= b) continue;
          acc += 0.5 * ((*this)(tt) + prev_v) * (tt - prev_t);
          prev_t = tt;
          prev_v = (*this)(tt);
        }
        acc += 0.5 * ((*this)(b) + prev_v) * (b - prev_t);
        return acc;
      }
    }
    return 0.0;
  }

  // Largest |sigma| the integrator can meet on [a, b].
  double max_abs_on(double a, double b) const {
    if (a > b) std::swap(a, b);
    switch (kind) {
      case SigmaKind::Zero:
        return 0.0;
      case SigmaKind::PaperExample: {
        double lo = std::min(std::abs(a), std::abs(b));
        if (a <= 0.0 && b >= 0.0) lo = 0.0;
        if (lo < r1) return std::max(sigma0, std::abs(sigma1) / (r1 * r1));
        return std::abs(sigma1) / (lo * lo);
      }
      case SigmaKind::Table: {
        double m = std::max(std::abs((*this)(a)), std::abs((*this)(b)));
        for (std::size_t i = 0; i < table_t.size(); ++i)
          if (table_t[i] > a && table_t[i] < b) m = std::max(m, std::abs(table_sigma[i]));
        return m;
      }
    }
    return 0.0;
  }

  bool covers(double a, double b) const {
    if (kind != SigmaKind::Table) return true;
    if (a > b) std::swap(a, b);
    return a >= table_t.front() && b <= table_t.back();
  }

  std::string describe() const {
    switch (kind) {
      case SigmaKind::Zero:
        return "zero";
      case SigmaKind::PaperExample:
        return "paper_example(sigma0=" + format_g17(sigma0) + ",sigma1=" + format_g17(sigma1) +
               ",r1=" + format_g17(r1) + ")";
      case SigmaKind::Table:
        return "table(" + std::to_string(table_t.size()) + " samples)";
    }
    return "?";
  }
};

// Scaling exponent of the inverse-square tail: the smaller indicial root of
// m(m-1) + sigma1 = 0.
inline double lambda_from_sigma1(double sigma1) {
  require(sigma1 < 0.25, ErrorKind::InvalidModel, "sigma1 must be < 1/4");
  return 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * sigma1));
}

}  // namespace tdho
