#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "iotsim/core/ids.hpp"

namespace iotsim {

/// Per-entity sliding window of the last W coarse steps: sends per
/// destination LP and events processed.
class InteractionWindow {
 public:
  InteractionWindow() = default;
  InteractionWindow(std::uint32_t window, std::uint32_t n_lps);

  void record_send(std::uint64_t step, LpId to);
  void record_processed(std::uint64_t step);

  /// Sends per LP summed over steps (step - W, step].
  std::vector<std::uint64_t> sends_to_lp(std::uint64_t step) const;
  std::uint64_t processed(std::uint64_t step) const;

  std::uint32_t window() const { return window_; }
  std::uint32_t n_lps() const { return n_lps_; }
  bool enabled() const { return window_ > 0; }

  friend bool operator==(const InteractionWindow&, const InteractionWindow&) = default;

 private:
  std::uint32_t slot(std::uint64_t step);
  bool in_window(std::uint32_t row, std::uint64_t step) const;

  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();
  std::uint32_t window_ = 0;
  std::uint32_t n_lps_ = 0;
  std::vector<std::uint64_t> row_step_;
  std::vector<std::uint32_t> sends_;  // row-major [row][lp]
  std::vector<std::uint32_t> processed_;
};

}  // namespace iotsim
