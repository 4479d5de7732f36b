#include "at3d/median_filter.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace at3d {

FilterWindow::FilterWindow(int capacity) : capacity_(capacity)
{
  if (capacity < 1 || capacity % 2 == 0) throw std::invalid_argument("filter window capacity must be odd and >= 1");
}

std::size_t FilterWindow::occupancy(int tag_id) const
{
  const auto it = history_.find(tag_id);
  return it == history_.end() ? 0 : it->second.size();
}

Pose6D FilterWindow::push(int tag_id, const Pose6D& pose)
{
  auto& h = history_[tag_id];
  h.push_back(pose);
  while (h.size() > static_cast<std::size_t>(capacity_)) h.pop_front();
  const std::vector<Pose6D> buffered(h.begin(), h.end());
  return median_pose(buffered);
}

Pose6D median_pose(std::span<const Pose6D> poses)
{
  if (poses.empty()) throw std::invalid_argument("median of an empty window");
  if (poses.size() == 1) return poses[0];

  const std::size_t n = poses.size();
  const std::size_t mid = (n - 1) / 2;
  Eigen::Vector3d t;
  std::vector<double> axis(n);
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < n; ++i) axis[i] = poses[i].translation()(a);
    std::nth_element(axis.begin(), axis.begin() + static_cast<std::ptrdiff_t>(mid), axis.end());
    t(a) = axis[mid];
  }

  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double cost = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) cost += rotation_distance(poses[i].rotation(), poses[j].rotation());
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return Pose6D(poses[best].rotation(), t);
}

}  // namespace at3d
