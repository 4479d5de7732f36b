#include "at3d/camera.hpp"

#include <stdexcept>

namespace at3d {

void CameraIntrinsics::validate() const
{
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("camera focal lengths must be positive");
  if (width <= 0 || height <= 0) throw std::invalid_argument("camera resolution must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    throw std::invalid_argument("principal point outside the image");
}

std::optional<Eigen::Vector2d> project(const CameraIntrinsics& k, const Eigen::Vector3d& p)
{
  if (!(p.z() > 0.0)) return std::nullopt;
  return Eigen::Vector2d(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
}

}  // namespace at3d
