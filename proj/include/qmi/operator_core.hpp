#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qmi/rng.hpp"

namespace qmi {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

constexpr Cplx kI{0.0, 1.0};

// e^A for a dense complex square matrix (scaling-and-squaring).
// Throws std::invalid_argument on non-finite entries.
Mat mat_exp(const Mat& a);

inline Mat dagger(const Mat& a) { return a.adjoint(); }
inline Cplx trace(const Mat& a) { return a.trace(); }
inline double frob_dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

// max |A - A^dag| over entries
double herm_defect(const Mat& a);

// Eigenvalues of a Hermitian matrix, ascending.
// Requires herm_defect(a) <= 1e-10, else throws std::invalid_argument.
std::vector<double> herm_eigvals(const Mat& a);

// Entries i.i.d. standard complex Gaussian, z = (g1 + i g2)/sqrt(2).
Mat random_ginibre(int dim, Rng& rng);
// (G + G^dag)/2 for Ginibre G; exactly Hermitian by construction.
Mat random_hermitian(int dim, Rng& rng);

Mat identity_op(int dim);
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat sigma_minus();  // |0><1|

}  // namespace qmi
