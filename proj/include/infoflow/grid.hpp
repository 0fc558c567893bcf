#pragma once

#include <cstddef>
#include <vector>

namespace infoflow {

/// Uniform time grid t_k = k * t_max / n_steps, k = 0..n_steps.
class TimeGrid {
 public:
  TimeGrid(double t_max, std::size_t n_steps);

  double t_max() const noexcept { return t_max_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return n_steps_ + 1; }
  double step() const noexcept { return t_max_ / static_cast<double>(n_steps_); }
  double time(std::size_t k) const noexcept;
  std::vector<double> times() const;

  /// Same span, n_steps multiplied by `factor`.
  TimeGrid refined(std::size_t factor) const;

 private:
  double t_max_;
  std::size_t n_steps_;
};

}  // namespace infoflow
