#pragma once
//
// Frames, PGM I/O, manifests, and the sliding-window construction of the
// n1 x n2 x L input tensors.
//
// Frame f of a sequence maps to frontal slice f - start of a window tensor;
// tensor rows are image rows (y), tensor columns image columns (x).
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "irstd/error.hpp"
#include "irstd/tensor.hpp"

namespace irstd {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;  // row-major, values in [0, 1]

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h, 0.0) {
    if (w == 0 || h == 0) throw Error(ErrorCode::DimensionMismatch, "image dimensions must be positive");
  }
  GrayImage(std::size_t w, std::size_t h, std::vector<double> px) : width(w), height(h), pixels(std::move(px)) {
    if (w == 0 || h == 0) throw Error(ErrorCode::DimensionMismatch, "image dimensions must be positive");
    if (pixels.size() != w * h) throw Error(ErrorCode::DimensionMismatch, "pixel count != width*height");
    for (double v : pixels) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, "pixel value outside [0,1]");
    }
  }

  double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  std::size_t pixel_count() const { return pixels.size(); }
};

struct FrameSequence {
  std::vector<GrayImage> frames;
  std::vector<std::string> sources;

  std::size_t size() const { return frames.size(); }
  std::size_t width() const { return frames.empty() ? 0 : frames.front().width; }
  std::size_t height() const { return frames.empty() ? 0 : frames.front().height; }

  void validate() const {
    if (frames.empty()) throw Error(ErrorCode::TooFewFrames, "sequence is empty");
    for (const auto& f : frames) {
      if (f.width != width() || f.height != height()) {
        throw Error(ErrorCode::DimensionMismatch, "frames differ in size");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// files

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot rename into " + path.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

namespace detail {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number() {
    skip_space_and_comments();
    std::size_t v = 0;
    const std::size_t begin = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == begin) throw Error(ErrorCode::TruncatedPayload, "malformed PGM header");
    return v;
  }

  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorCode::TruncatedPayload, "malformed PGM header");
    }
    ++pos_;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a binary PGM ("P5", maxval 255 or 65535, 16-bit samples big-endian).
inline GrayImage decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw Error(ErrorCode::BadMagic, "not a binary PGM (P5)");
  detail::PgmHeaderReader reader(bytes.substr(2));
  const std::size_t w = reader.number();
  const std::size_t h = reader.number();
  const std::size_t maxval = reader.number();
  reader.single_whitespace();
  if (maxval != 255 && maxval != 65535) throw Error(ErrorCode::UnsupportedMaxval, std::to_string(maxval));
  if (w == 0 || h == 0) throw Error(ErrorCode::DimensionMismatch, "PGM with zero size");

  const std::size_t sample = maxval > 255 ? 2 : 1;
  const std::size_t offset = 2 + reader.pos();
  if (bytes.size() - offset < w * h * sample) {
    throw Error(ErrorCode::TruncatedPayload,
                "expected " + std::to_string(w * h * sample) + " bytes, got " + std::to_string(bytes.size() - offset));
  }
  std::vector<double> px(w * h);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t n = 0; n < px.size(); ++n) {
    const unsigned v = sample == 2 ? (static_cast<unsigned>(p[2 * n]) << 8) | p[2 * n + 1] : p[n];
    px[n] = static_cast<double>(v) / static_cast<double>(maxval);
  }
  return GrayImage(w, h, std::move(px));
}

inline std::string encode_pgm(const GrayImage& img, unsigned maxval = 65535) {
  if (maxval != 255 && maxval != 65535) throw Error(ErrorCode::UnsupportedMaxval, std::to_string(maxval));
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                    std::to_string(maxval) + "\n";
  out.reserve(out.size() + img.pixel_count() * (maxval > 255 ? 2 : 1));
  for (double v : img.pixels) {
    const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
    if (maxval > 255) out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xFF));
  }
  return out;
}

inline GrayImage read_image(const std::filesystem::path& path) {
  try {
    return decode_pgm(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline void write_image(const GrayImage& img, const std::filesystem::path& path, unsigned maxval = 65535) {
  write_file_atomic(path, encode_pgm(img, maxval));
}

/// One path per line; blank lines and '#' comments skipped; relative paths
/// resolve against the manifest's directory.
inline std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::filesystem::path> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    line.erase(0, b);
    if (line.empty() || line[0] == '#') continue;
    std::filesystem::path p(line);
    out.push_back(p.is_absolute() ? p : path.parent_path() / p);
  }
  return out;
}

inline void write_manifest(const std::filesystem::path& path, std::span<const std::string> entries) {
  std::string text;
  for (const auto& e : entries) text += e + "\n";
  write_file_atomic(path, text);
}

inline FrameSequence load_sequence(const std::filesystem::path& manifest) {
  FrameSequence seq;
  for (const auto& p : read_manifest(manifest)) {
    seq.frames.push_back(read_image(p));
    seq.sources.push_back(p.string());
  }
  seq.validate();
  return seq;
}

// ---------------------------------------------------------------------------
// windows

struct WindowOptions {
  std::size_t length = 3;
  std::size_t step = 0;  // 0: same as length
  // Spatial patches; 0 keeps the full frame.
  std::size_t patch_rows = 0;
  std::size_t patch_cols = 0;
  std::size_t patch_stride = 0;  // 0: same as the patch size
};

struct Window {
  std::size_t start_frame = 0;
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  Tensor3 tensor;  // rows x cols x length
};

struct WindowPlan {
  std::size_t length = 0;
  std::size_t step = 0;
  std::size_t frame_count = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Window> windows;
};

/// Offsets 0, step, 2 step, ... that fit, plus a final one anchored at
/// total - span when the stride leaves a tail uncovered.
inline std::vector<std::size_t> window_offsets(std::size_t total, std::size_t span, std::size_t step) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s + span <= total; s += step) out.push_back(s);
  if (out.empty() || out.back() + span < total) out.push_back(total - span);
  return out;
}

inline WindowPlan build_windows(const FrameSequence& seq, const WindowOptions& opts) {
  seq.validate();
  const std::size_t L = opts.length;
  const std::size_t step = opts.step == 0 ? L : opts.step;
  if (L == 0) throw Error(ErrorCode::InvalidArgument, "window length must be positive");
  if (seq.size() < L) {
    throw Error(ErrorCode::TooFewFrames,
                std::to_string(seq.size()) + " frames, window needs " + std::to_string(L));
  }
  const std::size_t rows = opts.patch_rows == 0 ? seq.height() : opts.patch_rows;
  const std::size_t cols = opts.patch_cols == 0 ? seq.width() : opts.patch_cols;
  if (rows > seq.height() || cols > seq.width()) throw Error(ErrorCode::InvalidArgument, "patch larger than frame");
  const std::size_t row_step = opts.patch_stride == 0 ? rows : opts.patch_stride;
  const std::size_t col_step = opts.patch_stride == 0 ? cols : opts.patch_stride;
  // a stride longer than the window would skip frames or pixels
  if (step > L) throw Error(ErrorCode::InvalidArgument, "step exceeds window length");
  if (row_step > rows || col_step > cols) throw Error(ErrorCode::InvalidArgument, "patch stride exceeds patch size");

  WindowPlan plan{L, step, seq.size(), seq.height(), seq.width(), {}};
  for (std::size_t start : window_offsets(seq.size(), L, step)) {
    // patches move left to right, then top to bottom
    for (std::size_t r0 : window_offsets(seq.height(), rows, row_step)) {
      for (std::size_t c0 : window_offsets(seq.width(), cols, col_step)) {
        Tensor3 t(rows, cols, L);
        for (std::size_t k = 0; k < L; ++k) {
          const GrayImage& f = seq.frames[start + k];
          for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t i = 0; i < rows; ++i) t(i, j, k) = f.at(c0 + j, r0 + i);
        }
        plan.windows.push_back(Window{start, r0, c0, std::move(t)});
      }
    }
  }
  return plan;
}

inline WindowPlan build_windows(const FrameSequence& seq, std::size_t length, std::size_t step) {
  return build_windows(seq, WindowOptions{length, step, 0, 0, 0});
}

/// Per-pixel mean of all window slices covering each (frame, pixel), as a
/// height x width x frames tensor.
inline Tensor3 reconstruct(const WindowPlan& plan, std::span<const Tensor3> tensors) {
  if (tensors.size() != plan.windows.size()) {
    throw Error(ErrorCode::AlignmentMismatch, std::to_string(tensors.size()) + " tensors for " +
                                                   std::to_string(plan.windows.size()) + " windows");
  }
  Tensor3 sum(plan.height, plan.width, plan.frame_count);
  std::vector<std::uint32_t> count(sum.size(), 0);
  for (std::size_t w = 0; w < tensors.size(); ++w) {
    const Window& win = plan.windows[w];
    const Tensor3& t = tensors[w];
    if (!t.same_shape(win.tensor)) throw Error(ErrorCode::AlignmentMismatch, "tensor shape differs from its window");
    for (std::size_t k = 0; k < t.n3(); ++k)
      for (std::size_t j = 0; j < t.n2(); ++j)
        for (std::size_t i = 0; i < t.n1(); ++i) {
          const std::size_t r = win.row0 + i, c = win.col0 + j, f = win.start_frame + k;
          sum(r, c, f) += t(i, j, k);
          ++count[r + plan.height * (c + plan.width * f)];
        }
  }
  auto data = sum.data();
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (count[n] > 0) data[n] /= count[n];
  }
  return sum;
}

/// Tensor slice k as an image; values are clamped to [0, 1].
inline GrayImage tensor_slice_image(const Tensor3& t, std::size_t k, double scale = 1.0) {
  GrayImage img(t.n2(), t.n1());
  for (std::size_t y = 0; y < t.n1(); ++y)
    for (std::size_t x = 0; x < t.n2(); ++x) img.at(x, y) = std::clamp(t(y, x, k) * scale, 0.0, 1.0);
  return img;
}

/// Per-frame target maps: windows averaged, negative responses clamped to 0,
/// then everything divided by the global maximum (all-zero if that is 0).
inline std::vector<GrayImage> reconstruct_maps(const WindowPlan& plan, std::span<const Tensor3> targets) {
  const Tensor3 merged = reconstruct(plan, targets);
  double peak = 0.0;
  for (double v : merged.data()) peak = std::max(peak, v);
  const double scale = peak > 0.0 ? 1.0 / peak : 0.0;
  std::vector<GrayImage> maps;
  maps.reserve(plan.frame_count);
  for (std::size_t k = 0; k < plan.frame_count; ++k) maps.push_back(tensor_slice_image(merged, k, scale));
  return maps;
}

}  // namespace irstd
