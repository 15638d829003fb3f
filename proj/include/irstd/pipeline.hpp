#pragma once

#include <vector>

#include "irstd/admm.hpp"
#include "irstd/sequence.hpp"

namespace irstd {

struct PipelineResult {
  WindowPlan plan;
  std::vector<Decomposition> runs;  // one per window
  std::vector<GrayImage> target_maps;
  std::vector<GrayImage> background_frames;
};

/// build_windows -> solve per window -> reconstruct target maps and backgrounds.
inline PipelineResult detect_sequence(const FrameSequence& seq, const SolverParams& params,
                                      const WindowOptions& windows) {
  PipelineResult out;
  out.plan = build_windows(seq, windows);
  std::vector<Tensor3> targets, backgrounds;
  for (const Window& w : out.plan.windows) {
    out.runs.push_back(solve(w.tensor, params));
    targets.push_back(out.runs.back().target);
    backgrounds.push_back(out.runs.back().background);
  }
  out.target_maps = reconstruct_maps(out.plan, targets);
  const Tensor3 bg = reconstruct(out.plan, backgrounds);
  for (std::size_t k = 0; k < bg.n3(); ++k) out.background_frames.push_back(tensor_slice_image(bg, k));
  return out;
}

}  // namespace irstd
