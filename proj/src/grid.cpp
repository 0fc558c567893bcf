#include "infoflow/grid.hpp"

#include <cmath>
#include <string>

#include "infoflow/error.hpp"

namespace infoflow {

TimeGrid::TimeGrid(double t_max, std::size_t n_steps) : t_max_(t_max), n_steps_(n_steps) {
  if (!std::isfinite(t_max) || t_max <= 0.0) {
    throw Error(Errc::InvalidArgument, "time grid needs t_max > 0, got " + std::to_string(t_max));
  }
  if (n_steps < 2) {
    throw Error(Errc::InvalidArgument, "time grid needs n_steps >= 2, got " + std::to_string(n_steps));
  }
}

double TimeGrid::time(std::size_t k) const noexcept {
  if (k == n_steps_) return t_max_;
  return t_max_ * static_cast<double>(k) / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = time(k);
  return out;
}

TimeGrid TimeGrid::refined(std::size_t factor) const { return TimeGrid(t_max_, n_steps_ * factor); }

}  // namespace infoflow
