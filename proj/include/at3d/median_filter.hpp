#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <span>

#include "at3d/pose.hpp"

namespace at3d {

constexpr int kDefaultWindowCapacity = 5;

/// Per-tag fixed-length pose histories for median filtering.
///
/// Single-writer state: one window per camera stream.
class FilterWindow {
 public:
  /// Throws std::invalid_argument unless capacity is odd and >= 1.
  explicit FilterWindow(int capacity = kDefaultWindowCapacity);

  int capacity() const { return capacity_; }
  std::size_t occupancy(int tag_id) const;
  void clear() { history_.clear(); }

  /// Buffers `pose` for `tag_id` (evicting the oldest entry when full) and
  /// returns the median of the current occupancy.
  Pose6D push(int tag_id, const Pose6D& pose);

 private:
  int capacity_;
  std::map<int, std::deque<Pose6D>> history_;
};

inline Pose6D median_filter_push(FilterWindow& win, int tag_id, const Pose6D& pose) { return win.push(tag_id, pose); }

/// Per-axis (lower) median of the translations combined with the rotation
/// medoid: the buffered rotation with least summed geodesic distance to the
/// others. Ties go to the earliest entry. `poses` must be non-empty.
Pose6D median_pose(std::span<const Pose6D> poses);

}  // namespace at3d
