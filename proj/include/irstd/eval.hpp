#pragma once
//
// Detection scoring: connected components, Pd / Fa, threshold sweeps and
// trapezoidal AUCs.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "irstd/error.hpp"
#include "irstd/sequence.hpp"
#include "irstd/synth.hpp"

namespace irstd {

struct Detection {
  Point centroid;
  std::size_t pixel_count = 0;
  double peak = 0.0;
};

struct PdFa {
  double pd = 0.0;
  double fa = 0.0;
};

/// 8-connected components of {pixel >= tau}, in raster order of their first
/// pixel. Centroids are intensity-weighted (plain mean if all weights are 0).
inline std::vector<Detection> detect_components(const GrayImage& map, double tau) {
  const std::size_t w = map.width, h = map.height;
  std::vector<char> seen(w * h, 0);
  std::vector<std::size_t> stack;
  std::vector<Detection> out;
  for (std::size_t start = 0; start < w * h; ++start) {
    if (seen[start] || !(map.pixels[start] >= tau)) continue;
    double sw = 0.0, sx = 0.0, sy = 0.0, ux = 0.0, uy = 0.0;
    Detection d;
    seen[start] = 1;
    stack.assign(1, start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const std::size_t x = p % w, y = p / w;
      const double v = map.pixels[p];
      sw += v;
      sx += v * static_cast<double>(x);
      sy += v * static_cast<double>(y);
      ux += static_cast<double>(x);
      uy += static_cast<double>(y);
      ++d.pixel_count;
      d.peak = std::max(d.peak, v);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const auto nx = static_cast<std::ptrdiff_t>(x) + dx, ny = static_cast<std::ptrdiff_t>(y) + dy;
          if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) || ny >= static_cast<std::ptrdiff_t>(h)) continue;
          const std::size_t q = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
          if (!seen[q] && map.pixels[q] >= tau) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
    const double n = static_cast<double>(d.pixel_count);
    d.centroid = sw > 0.0 ? Point{sx / sw, sy / sw} : Point{ux / n, uy / n};
    out.push_back(d);
  }
  return out;
}

/// Object-level Pd / Fa. A detection is true when its centroid is within
/// match_radius of a still-unmatched ground-truth centroid of its frame
/// (closest pairs matched first). Fa counts the pixels of false detections
/// over image_pixels * frames.
inline PdFa pd_fa(std::span<const std::vector<Detection>> detections, const GroundTruth& gt, double match_radius,
                  std::size_t image_pixels) {
  if (!(match_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "match_radius must be positive");
  if (gt.frames.size() > detections.size()) {
    throw Error(ErrorCode::LengthMismatch, "ground truth covers more frames than the detections");
  }
  std::size_t targets = 0, hits = 0, false_pixels = 0;
  for (std::size_t f = 0; f < detections.size(); ++f) {
    const auto& dets = detections[f];
    static const std::vector<Point> none;
    const auto& truth = f < gt.frames.size() ? gt.frames[f] : none;
    targets += truth.size();

    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t d = 0; d < dets.size(); ++d)
      for (std::size_t t = 0; t < truth.size(); ++t) {
        const double dist = std::hypot(dets[d].centroid.x - truth[t].x, dets[d].centroid.y - truth[t].y);
        if (dist <= match_radius) pairs.emplace_back(dist, d, t);
      }
    std::sort(pairs.begin(), pairs.end());
    std::vector<char> det_used(dets.size(), 0), gt_used(truth.size(), 0);
    for (const auto& [dist, d, t] : pairs) {
      if (det_used[d] || gt_used[t]) continue;
      det_used[d] = gt_used[t] = 1;
      ++hits;
    }
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (!det_used[d]) false_pixels += dets[d].pixel_count;
    }
  }
  PdFa r;
  r.pd = targets > 0 ? static_cast<double>(hits) / static_cast<double>(targets) : 0.0;
  const double total = static_cast<double>(image_pixels) * static_cast<double>(detections.size());
  r.fa = total > 0.0 ? static_cast<double>(false_pixels) / total : 0.0;
  return r;
}

/// Trapezoidal integral of ys over ascending xs.
inline double auc(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::LengthMismatch, "xs and ys differ in length");
  if (xs.size() < 2) throw Error(ErrorCode::LengthMismatch, "need at least two points");
  double area = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1]) throw Error(ErrorCode::UnsortedInput, "xs must be ascending");
    area += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  }
  return area;
}

struct RocData {
  std::vector<double> thresholds;  // descending, 1 .. 0
  std::vector<double> pd;
  std::vector<double> fa;
  double auc_pf_pd = 0.0;
  double auc_pf_tau = 0.0;
  double auc_pd_tau = 0.0;
};

/// Pixel-anchored score of a threshold, monotone in tau by construction:
/// a target counts as detected when the map pixel nearest its centroid is
/// >= tau; false alarms are pixels >= tau lying farther than match_radius from
/// every ground-truth centroid of their frame, over all pixels of all frames.
class ThresholdScorer {
 public:
  ThresholdScorer(std::span<const GrayImage> maps, const GroundTruth& gt, double match_radius) {
    if (!(match_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "match_radius must be positive");
    if (gt.frames.size() > maps.size()) {
      throw Error(ErrorCode::LengthMismatch, "ground truth covers more frames than the maps");
    }
    for (std::size_t f = 0; f < maps.size(); ++f) {
      const GrayImage& m = maps[f];
      total_pixels_ += m.pixel_count();
      if (f >= gt.frames.size()) {
        background_.insert(background_.end(), m.pixels.begin(), m.pixels.end());
        continue;
      }
      const auto& truth = gt.frames[f];
      for (const Point& p : truth) {
        const auto x = static_cast<std::size_t>(std::clamp(std::lround(p.x), 0L, static_cast<long>(m.width) - 1));
        const auto y = static_cast<std::size_t>(std::clamp(std::lround(p.y), 0L, static_cast<long>(m.height) - 1));
        target_scores_.push_back(m.at(x, y));
      }
      for (std::size_t y = 0; y < m.height; ++y)
        for (std::size_t x = 0; x < m.width; ++x) {
          bool near = false;
          for (const Point& p : truth) {
            const double dx = static_cast<double>(x) - p.x, dy = static_cast<double>(y) - p.y;
            near = near || dx * dx + dy * dy <= match_radius * match_radius;
          }
          if (!near) background_.push_back(m.at(x, y));
        }
    }
    std::sort(target_scores_.begin(), target_scores_.end());
    std::sort(background_.begin(), background_.end());
  }

  PdFa operator()(double tau) const {
    auto at_least = [tau](const std::vector<double>& sorted) {
      return static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), tau));
    };
    PdFa r;
    r.pd = target_scores_.empty() ? 0.0 : at_least(target_scores_) / static_cast<double>(target_scores_.size());
    r.fa = total_pixels_ == 0 ? 0.0 : at_least(background_) / static_cast<double>(total_pixels_);
    return r;
  }

 private:
  std::vector<double> target_scores_;
  std::vector<double> background_;
  std::size_t total_pixels_ = 0;
};

inline bool is_monotone(const RocData& roc) {
  // thresholds descend, so pd and fa may only grow along the arrays
  for (std::size_t i = 1; i < roc.thresholds.size(); ++i) {
    if (roc.thresholds[i] > roc.thresholds[i - 1]) return false;
    if (roc.pd[i] < roc.pd[i - 1] || roc.fa[i] < roc.fa[i - 1]) return false;
  }
  return true;
}

/// Sweeps a uniform threshold grid over [0, 1] and integrates the three curves:
/// (fa, pd) with the (0,0) and (1,1) end points added, (tau, fa), and (tau, pd).
inline RocData roc_curves(std::span<const GrayImage> maps, const GroundTruth& gt, std::size_t n_thresholds = 101,
                          double match_radius = 4.0) {
  if (n_thresholds < 2) throw Error(ErrorCode::InvalidArgument, "need at least two thresholds");
  const ThresholdScorer score(maps, gt, match_radius);
  RocData roc;
  const double last = static_cast<double>(n_thresholds - 1);
  for (std::size_t i = 0; i < n_thresholds; ++i) {
    const double tau = static_cast<double>(n_thresholds - 1 - i) / last;
    const PdFa r = score(tau);
    roc.thresholds.push_back(tau);
    roc.pd.push_back(r.pd);
    roc.fa.push_back(r.fa);
  }
  if (!is_monotone(roc)) throw Error(ErrorCode::UnsortedInput, "ROC curve is not monotone");

  std::vector<double> xs{0.0}, ys{0.0};
  xs.insert(xs.end(), roc.fa.begin(), roc.fa.end());
  ys.insert(ys.end(), roc.pd.begin(), roc.pd.end());
  xs.push_back(1.0);
  ys.push_back(1.0);
  roc.auc_pf_pd = auc(xs, ys);

  const std::vector<double> taus(roc.thresholds.rbegin(), roc.thresholds.rend());
  const std::vector<double> fa_up(roc.fa.rbegin(), roc.fa.rend());
  const std::vector<double> pd_up(roc.pd.rbegin(), roc.pd.rend());
  roc.auc_pf_tau = auc(taus, fa_up);
  roc.auc_pd_tau = auc(taus, pd_up);
  return roc;
}

inline std::string format_roc_csv(const RocData& roc) {
  std::ostringstream out;
  out.precision(10);
  out << "tau,pd,fa\n";
  for (std::size_t i = 0; i < roc.thresholds.size(); ++i)
    out << roc.thresholds[i] << ',' << roc.pd[i] << ',' << roc.fa[i] << '\n';
  return out.str();
}

inline std::string format_auc_csv(const RocData& roc) {
  std::ostringstream out;
  out.precision(10);
  out << "metric,value\n"
      << "auc_pf_pd," << roc.auc_pf_pd << '\n'
      << "auc_pf_tau," << roc.auc_pf_tau << '\n'
      << "auc_pd_tau," << roc.auc_pd_tau << '\n';
  return out.str();
}

}  // namespace irstd
