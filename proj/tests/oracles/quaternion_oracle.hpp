#pragma once

#include <array>
#include <vector>

namespace oracle {

using Quat = std::array<double, 4>;  // w, x, y, z

/// Unit quaternion maximizing sum_i w_i (q . q_i)^2, found by brute force:
/// dense random sampling of the 3-sphere followed by shrinking-step hill
/// climbing. Returned with w >= 0.
Quat brute_force_average(const std::vector<Quat>& qs, const std::vector<double>& weights);

}  // namespace oracle
