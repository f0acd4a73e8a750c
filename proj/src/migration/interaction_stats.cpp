#include "iotsim/migration/interaction_stats.hpp"

#include <algorithm>

namespace iotsim {

InteractionWindow::InteractionWindow(std::uint32_t window, std::uint32_t n_lps)
    : window_(window),
      n_lps_(n_lps),
      row_step_(window, kEmpty),
      sends_(static_cast<std::size_t>(window) * n_lps, 0),
      processed_(window, 0) {}

std::uint32_t InteractionWindow::slot(std::uint64_t step) {
  const auto row = static_cast<std::uint32_t>(step % window_);
  if (row_step_[row] != step) {
    row_step_[row] = step;
    std::fill_n(sends_.begin() + static_cast<std::ptrdiff_t>(row) * n_lps_, n_lps_, 0U);
    processed_[row] = 0;
  }
  return row;
}

bool InteractionWindow::in_window(std::uint32_t row, std::uint64_t step) const {
  const std::uint64_t s = row_step_[row];
  return s != kEmpty && s <= step && step - s < window_;
}

void InteractionWindow::record_send(std::uint64_t step, LpId to) {
  if (!enabled() || to >= n_lps_) return;
  const std::uint32_t row = slot(step);
  ++sends_[static_cast<std::size_t>(row) * n_lps_ + to];
}

void InteractionWindow::record_processed(std::uint64_t step) {
  if (!enabled()) return;
  ++processed_[slot(step)];
}

std::vector<std::uint64_t> InteractionWindow::sends_to_lp(std::uint64_t step) const {
  std::vector<std::uint64_t> out(n_lps_, 0);
  for (std::uint32_t row = 0; row < window_; ++row) {
    if (!in_window(row, step)) continue;
    for (std::uint32_t lp = 0; lp < n_lps_; ++lp) out[lp] += sends_[static_cast<std::size_t>(row) * n_lps_ + lp];
  }
  return out;
}

std::uint64_t InteractionWindow::processed(std::uint64_t step) const {
  std::uint64_t total = 0;
  for (std::uint32_t row = 0; row < window_; ++row) {
    if (in_window(row, step)) total += processed_[row];
  }
  return total;
}

}  // namespace iotsim
