#include "oracles/quaternion_oracle.hpp"

#include <cmath>
#include <random>

namespace oracle {
namespace {

Quat normalized(Quat q)
{
  const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& c : q) c /= n;
  return q;
}

double score(const Quat& q, const std::vector<Quat>& qs, const std::vector<double>& w)
{
  double s = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double d = q[0] * qs[i][0] + q[1] * qs[i][1] + q[2] * qs[i][2] + q[3] * qs[i][3];
    s += w[i] * d * d;
  }
  return s;
}

}  // namespace

Quat brute_force_average(const std::vector<Quat>& qs, const std::vector<double>& weights)
{
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> n01(0.0, 1.0);

  Quat best{1, 0, 0, 0};
  double best_score = -1.0;
  for (int i = 0; i < 200000; ++i) {
    const Quat q = normalized({n01(gen), n01(gen), n01(gen), n01(gen)});
    const double s = score(q, qs, weights);
    if (s > best_score) {
      best_score = s;
      best = q;
    }
  }
  for (double step = 0.05; step > 1e-13; step *= 0.5) {
    for (int tries = 0; tries < 400; ++tries) {
      Quat q = best;
      for (double& c : q) c += step * n01(gen);
      q = normalized(q);
      const double s = score(q, qs, weights);
      if (s > best_score) {
        best_score = s;
        best = q;
      }
    }
  }
  if (best[0] < 0.0)
    for (double& c : best) c = -c;
  return best;
}

}  // namespace oracle
