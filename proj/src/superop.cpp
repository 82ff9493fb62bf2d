#include "qmi/superop.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <stdexcept>

namespace qmi {

SuperOp::SuperOp(int dim, Mat m) : dim_(dim), m_(std::move(m)) {
    if (m_.rows() != dim_ * dim_ || m_.cols() != dim_ * dim_)
        throw std::invalid_argument("SuperOp: matrix must be d^2 x d^2");
}

SuperOp SuperOp::identity(int dim) {
    return SuperOp(dim, Mat::Identity(dim * dim, dim * dim));
}

SuperOp SuperOp::zero(int dim) {
    return SuperOp(dim, Mat::Zero(dim * dim, dim * dim));
}

Mat SuperOp::apply(const Mat& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_)
        throw std::invalid_argument("SuperOp::apply: dimension mismatch");
    return unvec(m_ * vec(rho), dim_);
}

SuperOp SuperOp::compose(const SuperOp& other) const {
    if (other.dim_ != dim_)
        throw std::invalid_argument("SuperOp::compose: dimension mismatch");
    return SuperOp(dim_, m_ * other.m_);
}

SuperOp& SuperOp::operator+=(const SuperOp& other) {
    if (other.dim_ != dim_)
        throw std::invalid_argument("SuperOp: dimension mismatch");
    m_ += other.m_;
    return *this;
}

SuperOp SuperOp::operator+(const SuperOp& other) const {
    SuperOp r = *this;
    r += other;
    return r;
}

SuperOp SuperOp::operator-(const SuperOp& other) const {
    if (other.dim_ != dim_)
        throw std::invalid_argument("SuperOp: dimension mismatch");
    return SuperOp(dim_, m_ - other.m_);
}

SuperOp SuperOp::operator*(Cplx scale) const { return SuperOp(dim_, m_ * scale); }

CVec vec(const Mat& rho) {
    // Eigen stores column-major, so the raw buffer is already column-stacked.
    return Eigen::Map<const CVec>(rho.data(), rho.size());
}

Mat unvec(const CVec& v, int dim) {
    return Eigen::Map<const Mat>(v.data(), dim, dim);
}

SuperOp sandwich(const Mat& a, const Mat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("sandwich: operators must be square and same dim");
    const int d = static_cast<int>(a.rows());
    Mat m = Eigen::kroneckerProduct(b.conjugate(), a);
    return SuperOp(d, std::move(m));
}

SuperOp hs_adjoint(const SuperOp& s) {
    return SuperOp(s.dim(), s.matrix().adjoint());
}

namespace {

Mat reshuffle(const Mat& m, int d) {
    Mat c(d * d, d * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < d; ++l)
                for (int k = 0; k < d; ++k)
                    c(i + d * j, k + d * l) = m(i + d * k, j + d * l);
    return c;
}

}  // namespace

SuperOp choi_involution(const SuperOp& s) {
    return SuperOp(s.dim(), reshuffle(s.matrix(), s.dim()));
}

Mat to_choi(const SuperOp& s) { return reshuffle(s.matrix(), s.dim()); }

SuperOp cj_quasi_adjoint(const SuperOp& s) {
    const int d = s.dim();
    return SuperOp(d, reshuffle(Mat(reshuffle(s.matrix(), d).adjoint()), d));
}

CpReport is_cp(const SuperOp& s, double tol) {
    Mat c = to_choi(s);
    Eigen::SelfAdjointEigenSolver<Mat> es((c + c.adjoint()) / 2.0);
    const double min_eig = es.eigenvalues().minCoeff();
    return {min_eig >= -tol, min_eig};
}

TpReport is_tp(const SuperOp& s, double tol) {
    const Mat id = Mat::Identity(s.dim(), s.dim());
    const double defect = (hs_adjoint(s).apply(id) - id).norm();
    return {defect <= tol, defect};
}

SuperOp lindblad_dissipator(const std::vector<Mat>& ls) {
    if (ls.empty())
        throw std::invalid_argument("lindblad_dissipator: need at least one operator");
    const int d = static_cast<int>(ls.front().rows());
    const Mat id = Mat::Identity(d, d);
    SuperOp out = SuperOp::zero(d);
    for (const Mat& l : ls) {
        if (l.rows() != d || l.cols() != d)
            throw std::invalid_argument("lindblad_dissipator: dimension mismatch");
        const Mat ldl = l.adjoint() * l;
        out += sandwich(l, l) - sandwich(ldl, id) * 0.5 - sandwich(id, ldl) * 0.5;
    }
    return out;
}

SuperOp channel_exp(const SuperOp& gen, double s) {
    return SuperOp(gen.dim(), mat_exp(gen.matrix() * s));
}

double frob_dist(const SuperOp& a, const SuperOp& b) {
    return (a.matrix() - b.matrix()).norm();
}

}  // namespace qmi
