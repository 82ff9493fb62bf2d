#include "qmi/operator_core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace qmi {

Mat mat_exp(const Mat& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("mat_exp: matrix must be square");
    if (!a.allFinite())
        throw std::invalid_argument("mat_exp: non-finite entries");
    return a.exp();
}

double herm_defect(const Mat& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> herm_eigvals(const Mat& a) {
    if (herm_defect(a) > 1e-10)
        throw std::invalid_argument("herm_eigvals: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es((a + a.adjoint()) / 2.0);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

Mat random_ginibre(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("random_ginibre: dim must be >= 1");
    Mat g(dim, dim);
    const double s = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            g(i, j) = Cplx(rng.gaussian() * s, rng.gaussian() * s);
    return g;
}

Mat random_hermitian(int dim, Rng& rng) {
    Mat g = random_ginibre(dim, rng);
    return (g + g.adjoint()) / 2.0;
}

Mat identity_op(int dim) { return Mat::Identity(dim, dim); }

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat sigma_minus() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}

}  // namespace qmi
