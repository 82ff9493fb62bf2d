#pragma once

#include <vector>

#include "qmi/operator_core.hpp"

namespace qmi {

// Superoperators act on column-stacked operators, vec(rho)[i + d*j] = rho(i,j),
// so the map rho -> A rho B^dag has matrix conj(B) (x) A. This convention is
// fixed project-wide; the Choi reshuffle below depends on it.
class SuperOp {
public:
    SuperOp() = default;
    SuperOp(int dim, Mat m);

    static SuperOp identity(int dim);
    static SuperOp zero(int dim);

    int dim() const { return dim_; }
    const Mat& matrix() const { return m_; }
    Mat& matrix() { return m_; }

    Mat apply(const Mat& rho) const;

    // this after other
    SuperOp compose(const SuperOp& other) const;

    SuperOp& operator+=(const SuperOp& other);
    SuperOp operator+(const SuperOp& other) const;
    SuperOp operator-(const SuperOp& other) const;
    SuperOp operator*(Cplx scale) const;

private:
    int dim_ = 0;
    Mat m_;
};

CVec vec(const Mat& rho);
Mat unvec(const CVec& v, int dim);

// rho -> A rho B^dag
SuperOp sandwich(const Mat& a, const Mat& b);

// Adjoint with respect to tr(B^dag A); reverses composition order.
SuperOp hs_adjoint(const SuperOp& s);

// Index reshuffle |a><c| (.) |d><b|  ->  |a><b| (.) |d><c|; involutive.
// The same reshuffle read as a plain matrix is the Choi matrix, normalized so
// that the identity channel has Choi trace d.
SuperOp choi_involution(const SuperOp& s);
Mat to_choi(const SuperOp& s);

// reshuffle . hs_adjoint . reshuffle; preserves composition order.
SuperOp cj_quasi_adjoint(const SuperOp& s);

struct CpReport {
    bool cp;
    double min_choi_eig;
};
struct TpReport {
    bool tp;
    double defect;  // ||S^adj(1) - 1||_F
};

CpReport is_cp(const SuperOp& s, double tol = 1e-8);
TpReport is_tp(const SuperOp& s, double tol = 1e-8);

// sum_k ( L_k (.) L_k^dag - 1/2 (L_k^dag L_k (.) 1 + 1 (.) L_k^dag L_k) )
SuperOp lindblad_dissipator(const std::vector<Mat>& ls);

// e^{G s}
SuperOp channel_exp(const SuperOp& gen, double s);

double frob_dist(const SuperOp& a, const SuperOp& b);

}  // namespace qmi
