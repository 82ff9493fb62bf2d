#include "qmi/gauss_hermite.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qmi {

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(i / 2.0);
        j(i, i - 1) = b;
        j(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = v0 * v0;  // mu_0 = sqrt(pi) cancels after normalization
        wsum += rule.weights[i];
    }
    for (double& w : rule.weights) w /= wsum;
    return rule;
}

}  // namespace qmi
