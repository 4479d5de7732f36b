#pragma once

#include <vector>

namespace oracle {

struct KsResult {
  double statistic = 0.0;  ///< sup |F_a - F_b|
  double p_value = 1.0;    ///< asymptotic Kolmogorov distribution
};

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace oracle
