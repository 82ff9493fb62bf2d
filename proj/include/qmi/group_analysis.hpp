#pragma once

#include <vector>

#include "qmi/operator_core.hpp"
#include "qmi/superop.hpp"
#include "qmi/trajectory.hpp"

namespace qmi {

// A group element held through its Kraus matrix in a faithful representation.
struct RepPoint {
    Mat kraus;
};

RepPoint random_rep_point(int dim, Rng& rng);

// Central difference (f(e^{hL} x) - f(e^{-hL} x)) / 2h at the Kraus level;
// equals L K_x up to O(h^2). h must lie in [1e-6, 1e-2].
Mat right_inv_derivative_kraus(const Mat& direction, const RepPoint& x, double h);

// Same derivative acting on the instrument element O_x = K_x (.) K_x^dag.
SuperOp right_inv_derivative_superop(const Mat& direction, const RepPoint& x,
                                     double h);

// (M (.) 1 + 1 (.) M^dag), the exact superoperator form of the right-invariant
// derivative along M acting on instrument elements.
SuperOp left_right_mult(const Mat& m);

// || O_{g x} - O_g . O_x ||_F
double translation_intertwining_residual(const RepPoint& g, const RepPoint& x);

// || hs_adjoint(O_x) - O_{x^dag} ||_F
double adjoint_intertwining_residual(const RepPoint& x);

enum class ProcessKind { jump, diffusive };

// Exact-algebra residual of the forward-generator identity against the
// dissipator, composed with O_x:
//   jump:      (-1/2 XR[L^dag L] + O_L) . O_x      = D[L] . O_x
//   diffusive: (-1/2 XR[L^dag L + L^2] + 1/2 XR[L]^2) . O_x = D[L] . O_x
double generator_intertwining_residual(const Mat& l, const RepPoint& x,
                                       ProcessKind kind);

// Summed generators over several Lindblads against the summed dissipator.
double generator_intertwining_residual(const std::vector<Mat>& ls, const RepPoint& x,
                                       ProcessKind kind);

struct WeakCommutatorResidual {
    double to_bch;       // || (K^L K^M)^-1 K^M K^L - exp([M,L] kappa dV dW) ||_F
    double to_identity;  // || (K^L K^M)^-1 K^M K^L - 1 ||_F
};

WeakCommutatorResidual weak_commutator_residual(const Mat& l, const Mat& m, double dw,
                                                double dv, double kappa, double dt);

// (r, x) = (kappa T, sqrt(kappa) sum dW): coordinates of e^{-L^2 r + L x}
// for a single Hermitian Lindblad. Composition adds coordinates.
struct AbelianCoord {
    double r;
    double x;
};

// Throws for non-Hermitian l or for records that are not single-channel Wiener.
AbelianCoord abelian_coordinates(const Mat& l, const MeasurementRecord& record,
                                 double kappa);

struct Histogram {
    std::vector<double> midpoints;
    std::vector<double> density;  // nonnegative, sums to ~1/bin_width weights
    double bin_width;
    double total_mass() const;
};

// Bin count must be odd; midpoints sit at integer multiples of the bin width,
// so two histograms convolve onto the same grid.
Histogram kod_histogram(const std::vector<double>& samples, int bins,
                        double half_width);

double histogram_l1_to_gaussian(const Histogram& h, double variance);

// Discrete Chapman-Kolmogorov splice: density of (a + b) from two histograms
// on the same grid, evaluated on that grid.
Histogram convolve_histograms(const Histogram& a, const Histogram& b);

double histogram_l1_distance(const Histogram& a, const Histogram& b);

}  // namespace qmi
