#include <algorithm>
#include <limits>
#include <vector>

#include "clusterability/dip.hpp"

namespace clusterability {

namespace {

struct Point {
  double x;
  double y;
};

// Envelope of `pts` (ascending x, distinct) evaluated at each abscissa.
// `lower` selects the greatest convex minorant, otherwise the least concave
// majorant.
std::vector<double> envelope(const std::vector<Point>& pts, bool lower) {
  std::vector<Point> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      const double cross = (b.y - a.y) * (p.x - a.x) - (p.y - a.y) * (b.x - a.x);
      if (lower ? cross >= 0.0 : cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::vector<double> out;
  out.reserve(pts.size());
  std::size_t seg = 0;
  for (const auto& p : pts) {
    while (seg + 1 < hull.size() && hull[seg + 1].x < p.x) ++seg;
    if (seg + 1 == hull.size()) {
      out.push_back(hull[seg].y);
      continue;
    }
    const Point& a = hull[seg];
    const Point& b = hull[seg + 1];
    out.push_back(a.y + (b.y - a.y) * (p.x - a.x) / (b.x - a.x));
  }
  return out;
}

// A bound on an endpoint value that is linear in the band half-width d:
// value(d) = base + slope * d.
struct LinearTerm {
  double base;
  double slope;
};

}  // namespace

double dip_reference_oracle(const SampleVector<double>& sample) {
  const Index n = sample.size();
  if (n < 2 || n > 12) throw UsageError("the reference dip handles 2..12 observations");

  // Distinct values v with ECDF counts: left limits lo_cnt, right values hi_cnt.
  std::vector<double> v;
  std::vector<double> left_count, right_count;
  for (Index i = 0; i < n; ++i) {
    if (v.empty() || sample[i] != v.back()) {
      v.push_back(sample[i]);
      left_count.push_back(double(i));
      right_count.push_back(double(i));
    }
    right_count.back() += 1.0;
  }
  const std::size_t k = v.size();
  if (k == 1) return 0.0;

  // With the mode at v[m] and band half-width d (counts), a unimodal U exists iff
  //  * a convex U on the left fits below L + d and above R - d,
  //  * a concave U on the right fits below L + d and above R - d,
  //  * the smallest reachable left limit U(v[m]-) does not exceed the largest
  //    reachable right value U(v[m]).
  // Each requirement reads "d >= const", so the optimum for a mode is their max.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < k; ++m) {
    double need = 0.0;

    std::vector<Point> left_pts;
    for (std::size_t j = 0; j <= m; ++j) left_pts.push_back({v[j], left_count[j]});
    const auto minorant = envelope(left_pts, true);
    for (std::size_t j = 0; j < m; ++j) {
      need = std::max(need, (right_count[j] - minorant[j]) / 2.0);
    }

    std::vector<Point> right_pts;
    for (std::size_t j = m; j < k; ++j) right_pts.push_back({v[j], right_count[j]});
    const auto majorant = envelope(right_pts, false);
    for (std::size_t j = m + 1; j < k; ++j) {
      need = std::max(need, (majorant[j - m] - left_count[j]) / 2.0);
    }

    // Lower bounds on U(v[m]-): base - slope * d.
    std::vector<LinearTerm> left_floor{{left_count[m], 1.0}};
    for (std::size_t j = 0; j < m; ++j) left_floor.push_back({right_count[j], 1.0});
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        // Line through the upper bound at v[a] and the lower bound at v[b].
        const double r = (v[m] - v[b]) / (v[b] - v[a]);
        left_floor.push_back({right_count[b] + (right_count[b] - left_count[a]) * r, 1.0 + 2.0 * r});
      }
    }
    // Upper bounds on U(v[m]): base + slope * d.
    std::vector<LinearTerm> right_ceiling{{right_count[m], 1.0}};
    for (std::size_t j = m + 1; j < k; ++j) right_ceiling.push_back({left_count[j], 1.0});
    for (std::size_t a = m + 1; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const double r = (v[a] - v[m]) / (v[b] - v[a]);
        right_ceiling.push_back({left_count[a] - (right_count[b] - left_count[a]) * r, 1.0 + 2.0 * r});
      }
    }

    // floor <= ceiling, floor <= L_m + d, R_m - d <= ceiling.
    for (const auto& f : left_floor) {
      for (const auto& c : right_ceiling) need = std::max(need, (f.base - c.base) / (f.slope + c.slope));
      need = std::max(need, (f.base - left_count[m]) / (f.slope + 1.0));
    }
    for (const auto& c : right_ceiling) {
      need = std::max(need, (right_count[m] - c.base) / (c.slope + 1.0));
    }
    best = std::min(best, need);
  }
  return best / double(n);
}

}  // namespace clusterability
