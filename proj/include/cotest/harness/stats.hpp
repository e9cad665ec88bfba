#pragma once

#include <cmath>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cotest/errors.hpp"

namespace cotest {

namespace detail {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

inline double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw ContractError("incomplete beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  // <= so the symmetric point x == (a+1)/(a+b+2) cannot recurse forever
  if (x <= (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
}

// P(T <= t) for Student's t with `dof` degrees of freedom.
inline double student_t_cdf(double t, double dof) {
  if (dof <= 0.0) throw ContractError("student_t_cdf: dof must be positive");
  if (t == 0.0) return 0.5;
  double x = dof / (dof + t * t);
  double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

// Two-tailed p-value of an observed t statistic.
inline double student_t_two_tailed_p(double t, double dof) {
  if (dof <= 0.0) throw ContractError("student_t_two_tailed_p: dof must be positive");
  return regularized_incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

enum class Verdict { loss, tie, win };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::loss: return "loss";
    case Verdict::tie: return "tie";
    case Verdict::win: return "win";
  }
  return "?";
}

struct ComparisonPoint {
  std::size_t labeled_count = 0;
  double mean_diff = 0.0;  // mean of (a - b) across folds
  double t_stat = 0.0;
  double p_value = 1.0;
  Verdict verdict = Verdict::tie;
};

struct ComparisonReport {
  std::string algorithm_a, algorithm_b;
  double alpha = 0.05;
  std::vector<ComparisonPoint> points;

  int count(Verdict v) const {
    int n = 0;
    for (const ComparisonPoint& p : points) n += (p.verdict == v);
    return n;
  }
};

// Paired two-tailed t-test of per-fold accuracy differences at one comparison
// point. Degenerate variance follows the documented convention: zero spread
// with zero mean is a tie, zero spread with a nonzero mean forces the sign.
inline ComparisonPoint paired_point(std::span<const double> diff_by_fold, std::size_t labeled_count,
                                    double alpha) {
  std::size_t n = diff_by_fold.size();
  if (n < 2) throw ContractError("paired_t_test: need >= 2 folds");
  double mean = 0.0;
  for (double d : diff_by_fold) mean += d;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff_by_fold) ss += (d - mean) * (d - mean);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));

  ComparisonPoint pt;
  pt.labeled_count = labeled_count;
  pt.mean_diff = mean;
  if (sd == 0.0) {
    pt.t_stat = 0.0;
    pt.p_value = (mean == 0.0) ? 1.0 : 0.0;
    pt.verdict = (mean == 0.0) ? Verdict::tie : (mean > 0.0 ? Verdict::win : Verdict::loss);
    return pt;
  }
  pt.t_stat = mean / (sd / std::sqrt(static_cast<double>(n)));
  pt.p_value = student_t_two_tailed_p(pt.t_stat, static_cast<double>(n - 1));
  if (pt.p_value < alpha)
    pt.verdict = mean > 0.0 ? Verdict::win : Verdict::loss;
  else
    pt.verdict = Verdict::tie;
  return pt;
}

struct WinTieLoss {
  long loss = 0, tie = 0, win = 0;
};

// Aggregate win/tie/loss counts per algorithm pair, like the significance
// tables: one row per compared pair.
inline std::map<std::pair<std::string, std::string>, WinTieLoss> summarize(
    std::span<const ComparisonReport> reports) {
  if (reports.empty()) throw ContractError("summarize: no reports");
  std::map<std::pair<std::string, std::string>, WinTieLoss> table;
  for (const ComparisonReport& r : reports) {
    WinTieLoss& row = table[{r.algorithm_a, r.algorithm_b}];
    row.loss += r.count(Verdict::loss);
    row.tie += r.count(Verdict::tie);
    row.win += r.count(Verdict::win);
  }
  return table;
}

inline std::string summary_csv(const std::map<std::pair<std::string, std::string>, WinTieLoss>& table) {
  std::ostringstream out;
  out << "algorithm_a,algorithm_b,loss,tie,win\n";
  for (const auto& [pair, row] : table)
    out << pair.first << ',' << pair.second << ',' << row.loss << ',' << row.tie << ',' << row.win
        << '\n';
  return out.str();
}

inline std::string summary_text(const std::map<std::pair<std::string, std::string>, WinTieLoss>& table) {
  std::size_t wa = 11, wb = 11;
  for (const auto& [pair, row] : table) {
    wa = std::max(wa, pair.first.size());
    wb = std::max(wb, pair.second.size());
  }
  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w) {
    std::string p = s;
    p.resize(w, ' ');
    return p;
  };
  out << pad("algorithm A", wa) << "  " << pad("vs B", wb) << "  Loss  Tie  Win\n";
  for (const auto& [pair, row] : table) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%5ld %4ld %4ld", row.loss, row.tie, row.win);
    out << pad(pair.first, wa) << "  " << pad(pair.second, wb) << " " << buf << '\n';
  }
  return out.str();
}

}  // namespace cotest
