#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cotest/errors.hpp"
#include "cotest/harness/stats.hpp"

namespace cotest {

struct CurvePoint {
  std::size_t labeled_count = 0;
  double accuracy = 0.0;
};

// Per-episode accuracy of one (algorithm, fold) run; the unit of statistical
// comparison.
struct LearningCurve {
  std::string algorithm;
  int fold = 0;
  std::vector<CurvePoint> points;
};

inline std::string format_accuracy(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", a);
  return buf;
}

inline void write_curves_csv(std::span<const LearningCurve> curves, std::ostream& out) {
  out << "algorithm,fold,labeled_count,accuracy\n";
  for (const LearningCurve& c : curves)
    for (const CurvePoint& p : c.points)
      out << c.algorithm << ',' << c.fold << ',' << p.labeled_count << ','
          << format_accuracy(p.accuracy) << '\n';
}

inline void write_curves_csv(std::span<const LearningCurve> curves,
                             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_curves_csv(curves, out);
}

inline std::vector<LearningCurve> read_curves_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curves file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<LearningCurve> curves;
  std::map<std::pair<std::string, int>, std::size_t> index;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("algorithm,", 0) == 0) continue;
    }
    std::istringstream ss(line);
    std::string algorithm, fold_s, count_s, acc_s;
    if (!std::getline(ss, algorithm, ',') || !std::getline(ss, fold_s, ',') ||
        !std::getline(ss, count_s, ',') || !std::getline(ss, acc_s))
      throw ParseError(path.string(), lineno, "expected algorithm,fold,labeled_count,accuracy");
    try {
      int fold = std::stoi(fold_s);
      CurvePoint p{std::stoul(count_s), std::stod(acc_s)};
      auto key = std::make_pair(algorithm, fold);
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, curves.size());
        curves.push_back({algorithm, fold, {p}});
      } else {
        curves[it->second].points.push_back(p);
      }
    } catch (const std::exception&) {
      throw ParseError(path.string(), lineno, "bad numeric field");
    }
  }
  return curves;
}

enum class ComparisonPoints { second_half, all };

inline ComparisonPoints parse_comparison_points(const std::string& s) {
  if (s == "second-half") return ComparisonPoints::second_half;
  if (s == "all") return ComparisonPoints::all;
  throw ConfigError("unknown comparison point set '" + s + "' (use second-half|all)");
}

// Paired t-test of two curve families that share fold structure and episode
// schedule. Comparisons default to the right-most half of the curve.
inline ComparisonReport paired_t_test(std::span<const LearningCurve> a,
                                      std::span<const LearningCurve> b,
                                      ComparisonPoints points = ComparisonPoints::second_half,
                                      double alpha = 0.05) {
  if (a.empty() || b.empty()) throw ContractError("paired_t_test: empty curve set");
  std::map<int, const LearningCurve*> by_fold_a, by_fold_b;
  for (const LearningCurve& c : a) by_fold_a[c.fold] = &c;
  for (const LearningCurve& c : b) by_fold_b[c.fold] = &c;
  if (by_fold_a.size() != a.size() || by_fold_b.size() != b.size())
    throw ContractError("paired_t_test: duplicate (algorithm, fold) curve");
  if (by_fold_a.size() < 2) throw ContractError("paired_t_test: need >= 2 folds");

  std::vector<int> folds;
  for (const auto& [fold, curve] : by_fold_a) {
    if (!by_fold_b.count(fold)) throw ContractError("paired_t_test: fold structure differs");
    folds.push_back(fold);
  }
  if (by_fold_b.size() != by_fold_a.size())
    throw ContractError("paired_t_test: fold structure differs");

  const std::vector<CurvePoint>& schedule = by_fold_a.begin()->second->points;
  auto check_schedule = [&](const LearningCurve& c) {
    if (c.points.size() != schedule.size())
      throw ContractError("paired_t_test: episode schedules differ");
    for (std::size_t i = 0; i < schedule.size(); ++i)
      if (c.points[i].labeled_count != schedule[i].labeled_count)
        throw ContractError("paired_t_test: labeled-count schedules differ");
  };
  for (const auto& [fold, curve] : by_fold_a) check_schedule(*curve);
  for (const auto& [fold, curve] : by_fold_b) check_schedule(*curve);

  std::size_t first = points == ComparisonPoints::all ? 0 : (schedule.size() + 1) / 2;

  ComparisonReport report;
  report.algorithm_a = a.front().algorithm;
  report.algorithm_b = b.front().algorithm;
  report.alpha = alpha;
  for (std::size_t i = first; i < schedule.size(); ++i) {
    std::vector<double> diffs;
    diffs.reserve(folds.size());
    for (int fold : folds)
      diffs.push_back(by_fold_a[fold]->points[i].accuracy - by_fold_b[fold]->points[i].accuracy);
    report.points.push_back(paired_point(diffs, schedule[i].labeled_count, alpha));
  }
  return report;
}

inline void write_report_csv(const ComparisonReport& report, std::ostream& out) {
  out << "algorithm_a,algorithm_b,alpha,labeled_count,mean_diff,t_stat,p_value,verdict\n";
  for (const ComparisonPoint& p : report.points)
    out << report.algorithm_a << ',' << report.algorithm_b << ',' << format_accuracy(report.alpha)
        << ',' << p.labeled_count << ',' << format_accuracy(p.mean_diff) << ','
        << format_accuracy(p.t_stat) << ',' << format_accuracy(p.p_value) << ','
        << verdict_name(p.verdict) << '\n';
}

// One report per (algorithm_a, algorithm_b) pair found in the file.
inline std::vector<ComparisonReport> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report file " + path.string());
  std::vector<ComparisonReport> reports;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("algorithm_a,", 0) == 0) continue;
    }
    std::istringstream ss(line);
    std::string a, b, alpha_s, count_s, mean_s, t_s, p_s, verdict_s;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, alpha_s, ',') ||
        !std::getline(ss, count_s, ',') || !std::getline(ss, mean_s, ',') ||
        !std::getline(ss, t_s, ',') || !std::getline(ss, p_s, ',') || !std::getline(ss, verdict_s))
      throw ParseError(path.string(), lineno, "bad report row");
    ComparisonPoint pt;
    try {
      pt.labeled_count = std::stoul(count_s);
      pt.mean_diff = std::stod(mean_s);
      pt.t_stat = std::stod(t_s);
      pt.p_value = std::stod(p_s);
    } catch (const std::exception&) {
      throw ParseError(path.string(), lineno, "bad numeric field");
    }
    if (verdict_s == "win")
      pt.verdict = Verdict::win;
    else if (verdict_s == "tie")
      pt.verdict = Verdict::tie;
    else if (verdict_s == "loss")
      pt.verdict = Verdict::loss;
    else
      throw ParseError(path.string(), lineno, "bad verdict '" + verdict_s + "'");
    auto key = std::make_pair(a, b);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, reports.size());
      ComparisonReport r;
      r.algorithm_a = a;
      r.algorithm_b = b;
      r.alpha = std::stod(alpha_s);
      r.points.push_back(pt);
      reports.push_back(std::move(r));
    } else {
      reports[it->second].points.push_back(pt);
    }
  }
  if (reports.empty()) throw ConfigError("report file " + path.string() + " has no rows");
  return reports;
}

// Minimal static SVG: mean accuracy over folds per algorithm.
inline void write_curves_svg(std::span<const LearningCurve> curves, std::ostream& out) {
  std::map<std::string, std::map<std::size_t, std::pair<double, int>>> mean;  // alg -> count -> (sum, n)
  std::size_t min_x = SIZE_MAX, max_x = 0;
  for (const LearningCurve& c : curves)
    for (const CurvePoint& p : c.points) {
      auto& cell = mean[c.algorithm][p.labeled_count];
      cell.first += p.accuracy;
      cell.second += 1;
      min_x = std::min(min_x, p.labeled_count);
      max_x = std::max(max_x, p.labeled_count);
    }
  const double W = 640, H = 400, L = 50, B = 30;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - 10 << "' y2='" << H - B
      << "' stroke='black'/>\n";
  out << "<line x1='" << L << "' y1='10' x2='" << L << "' y2='" << H - B << "' stroke='black'/>\n";
  const char* palette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#e67e22", "#2c3e50"};
  int color = 0;
  double span_x = max_x > min_x ? static_cast<double>(max_x - min_x) : 1.0;
  for (const auto& [alg, pts] : mean) {
    out << "<polyline fill='none' stroke='" << palette[color % 6] << "' stroke-width='1.5' points='";
    for (const auto& [x, cell] : pts) {
      double px = L + (static_cast<double>(x - min_x) / span_x) * (W - L - 20);
      double py = (H - B) - (cell.first / cell.second) * (H - B - 20);
      out << px << ',' << py << ' ';
    }
    out << "'/>\n";
    out << "<text x='" << W - 150 << "' y='" << 20 + 16 * color << "' fill='" << palette[color % 6]
        << "' font-size='12'>" << alg << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace cotest
