#pragma once
//
// Synthetic infrared sequences with exact ground truth.
//
// Background: sum of `background_rank` separable smooth components
// p_q(y) s_q(x) with low-frequency cosine profiles and a slow per-frame drift
// in each component's weight, so every frame has rank <= background_rank.
// Targets: Gaussian spots amplitude * exp(-r^2 / (2 sigma^2)). Noise: i.i.d.
// N(0, noise_sigma^2). Output is clipped to [0, 1].
//
// All randomness comes from irstd::Rng, so a seed fixes the output bit for bit.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "irstd/error.hpp"
#include "irstd/random.hpp"
#include "irstd/sequence.hpp"

namespace irstd {

struct Point {
  double x = 0.0;  // column
  double y = 0.0;  // row
};

struct SynthTarget {
  std::vector<Point> trajectory;  // one centroid per frame
  double amplitude = 0.0;
  double radius_sigma = 1.5;
};

struct SynthSpec {
  std::size_t width = 64;
  std::size_t height = 64;
  std::size_t frames = 9;
  std::size_t background_rank = 2;
  double noise_sigma = 0.02;
  double drift = 0.02;  // relative amplitude of the per-frame weight drift
  std::vector<SynthTarget> targets;
  std::uint64_t seed = 1;

  void validate() const {
    if (width == 0 || height == 0 || frames == 0) throw Error(ErrorCode::InvalidSpec, "sizes must be positive");
    if (background_rank == 0) throw Error(ErrorCode::InvalidSpec, "background_rank must be positive");
    if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidSpec, "noise_sigma must be nonnegative");
    if (!(drift >= 0.0 && drift < 1.0)) throw Error(ErrorCode::InvalidSpec, "drift must be in [0, 1)");
    for (const auto& t : targets) {
      if (t.trajectory.size() != frames) {
        throw Error(ErrorCode::InvalidSpec, "trajectory has " + std::to_string(t.trajectory.size()) +
                                                " entries for " + std::to_string(frames) + " frames");
      }
      if (!(t.amplitude > 0.0)) throw Error(ErrorCode::InvalidSpec, "target amplitude must be positive");
      if (!(t.radius_sigma > 0.0)) throw Error(ErrorCode::InvalidSpec, "target radius must be positive");
    }
  }
};

/// Target centroids per frame.
struct GroundTruth {
  std::vector<std::vector<Point>> frames;

  std::size_t target_count() const {
    std::size_t n = 0;
    for (const auto& f : frames) n += f.size();
    return n;
  }
};

struct SynthOutput {
  FrameSequence sequence;
  GroundTruth truth;
};

inline std::vector<Point> linear_trajectory(Point start, Point velocity, std::size_t frames) {
  std::vector<Point> out;
  out.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    out.push_back({start.x + velocity.x * static_cast<double>(f), start.y + velocity.y * static_cast<double>(f)});
  }
  return out;
}

/// Noise-free, target-free, unclipped background; frame f at [f * width * height].
inline std::vector<double> render_background(const SynthSpec& spec) {
  spec.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const std::size_t w = spec.width, h = spec.height;
  Rng rng(spec.seed);
  std::vector<double> bg(w * h * spec.frames, 0.0);
  std::vector<double> py(h), sx(w);
  for (std::size_t q = 0; q < spec.background_rank; ++q) {
    const double fy = rng.uniform(0.5, 1.5), fx = rng.uniform(0.5, 1.5);
    const double phy = rng.uniform(0.0, two_pi), phx = rng.uniform(0.0, two_pi);
    const double drift_phase = rng.uniform(0.0, two_pi);
    // The first component carries the (positive) mean level.
    const double offset = q == 0 ? 3.0 : 0.0;
    const double weight = q == 0 ? 0.035 : 0.06;
    for (std::size_t y = 0; y < h; ++y) py[y] = offset + std::cos(two_pi * fy * static_cast<double>(y) / h + phy);
    for (std::size_t x = 0; x < w; ++x) sx[x] = offset + std::cos(two_pi * fx * static_cast<double>(x) / w + phx);
    for (std::size_t f = 0; f < spec.frames; ++f) {
      const double wf =
          weight * (1.0 + spec.drift * std::sin(std::numbers::pi * static_cast<double>(f) / spec.frames + drift_phase));
      double* frame = bg.data() + f * w * h;
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) frame[y * w + x] += wf * py[y] * sx[x];
    }
  }
  return bg;
}

/// Standard deviation of the rendered background over all frames.
inline double background_std(const SynthSpec& spec) {
  const auto bg = render_background(spec);
  double mean = 0.0;
  for (double v : bg) mean += v;
  mean /= static_cast<double>(bg.size());
  double var = 0.0;
  for (double v : bg) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(bg.size()));
}

inline SynthOutput gen_sequence(const SynthSpec& spec) {
  spec.validate();
  const std::size_t w = spec.width, h = spec.height;
  std::vector<double> img = render_background(spec);

  for (const auto& t : spec.targets) {
    const double inv = 1.0 / (2.0 * t.radius_sigma * t.radius_sigma);
    for (std::size_t f = 0; f < spec.frames; ++f) {
      const Point c = t.trajectory[f];
      double* frame = img.data() + f * w * h;
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
          const double dx = static_cast<double>(x) - c.x, dy = static_cast<double>(y) - c.y;
          frame[y * w + x] += t.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
        }
    }
  }

  SynthOutput out;
  for (std::size_t f = 0; f < spec.frames; ++f) {
    Rng noise(spec.seed ^ (0x9E3779B97F4A7C15ULL * (f + 1)));
    std::vector<double> px(img.begin() + static_cast<std::ptrdiff_t>(f * w * h),
                           img.begin() + static_cast<std::ptrdiff_t>((f + 1) * w * h));
    for (double& v : px) {
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise.normal();
      v = std::clamp(v, 0.0, 1.0);
    }
    out.sequence.frames.emplace_back(w, h, std::move(px));
    out.sequence.sources.push_back("synthetic:" + std::to_string(f));
  }
  out.truth.frames.resize(spec.frames);
  for (const auto& t : spec.targets)
    for (std::size_t f = 0; f < spec.frames; ++f) out.truth.frames[f].push_back(t.trajectory[f]);
  return out;
}

/// 64 x 64, 9 frames, rank-2 background, noise 0.02, and three moving targets
/// of amplitude `amplitude_factor` times the background standard deviation.
inline SynthSpec default_spec(std::uint64_t seed = 1, double amplitude_factor = 3.0) {
  SynthSpec spec;
  spec.seed = seed;
  const double amp = amplitude_factor * background_std(spec);
  const std::size_t n = spec.frames;
  spec.targets = {
      {linear_trajectory({20.0, 16.0}, {0.5, 1.0}, n), amp, 1.5},
      {linear_trajectory({12.0, 44.0}, {1.0, 0.0}, n), amp, 1.5},
      {linear_trajectory({48.0, 32.0}, {0.0, -0.75}, n), amp, 1.5},
  };
  return spec;
}

// ---------------------------------------------------------------------------
// text formats

/// key = value lines; `target = x0 y0 vx vy amplitude sigma` may repeat.
inline SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec spec;
  std::vector<std::array<double, 6>> targets;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::istringstream value(trim(line.substr(eq + 1)));
    auto fail = [&] { throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(lineno) + ": bad value for " + key); };
    auto read = [&](auto& dst) {
      if (!(value >> dst)) fail();
    };
    if (key == "width") read(spec.width);
    else if (key == "height") read(spec.height);
    else if (key == "frames") read(spec.frames);
    else if (key == "background_rank") read(spec.background_rank);
    else if (key == "noise_sigma") read(spec.noise_sigma);
    else if (key == "drift") read(spec.drift);
    else if (key == "seed") read(spec.seed);
    else if (key == "target") {
      std::array<double, 6> t{};
      for (auto& v : t) read(v);
      targets.push_back(t);
    } else {
      throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    std::string rest;
    if (value >> rest) fail();
  }
  for (const auto& t : targets) {
    spec.targets.push_back({linear_trajectory({t[0], t[1]}, {t[2], t[3]}, spec.frames), t[4], t[5]});
  }
  spec.validate();
  return spec;
}

/// Ground truth as CSV with header `frame,x,y`, frames counted from 0.
inline std::string format_ground_truth(const GroundTruth& gt) {
  std::ostringstream out;
  out.precision(17);
  out << "frame,x,y\n";
  for (std::size_t f = 0; f < gt.frames.size(); ++f)
    for (const auto& p : gt.frames[f]) out << f << ',' << p.x << ',' << p.y << '\n';
  return out.str();
}

inline GroundTruth parse_ground_truth(std::string_view text, std::size_t frame_count = 0) {
  GroundTruth gt;
  gt.frames.resize(frame_count);
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "frame,x,y") throw Error(ErrorCode::InvalidSpec, "ground truth header must be 'frame,x,y'");
      continue;
    }
    std::istringstream row(line);
    std::size_t f = 0;
    Point p;
    char c1 = 0, c2 = 0;
    if (!(row >> f >> c1 >> p.x >> c2 >> p.y) || c1 != ',' || c2 != ',') {
      throw Error(ErrorCode::InvalidSpec, "bad ground truth row '" + line + "'");
    }
    if (f >= gt.frames.size()) gt.frames.resize(f + 1);
    gt.frames[f].push_back(p);
  }
  return gt;
}

}  // namespace irstd
