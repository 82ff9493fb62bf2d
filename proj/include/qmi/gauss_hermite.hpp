#pragma once

#include <vector>

namespace qmi {

// Nodes u_i and probability weights w_i with sum(w) = 1, discretizing
// integrals against the standard Gaussian in the form
//   int dW G_dt(dW) f(dW)  ~=  sum_i w_i f(sqrt(2 dt) u_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Golub-Welsch on the Hermite recurrence. n >= 1.
GaussHermiteRule gauss_hermite(int n);

}  // namespace qmi
