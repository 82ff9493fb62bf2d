#pragma once

#include <vector>

#include "qmi/operator_core.hpp"

namespace qmi {

// Truncated-Fock meter coupled to the system for one weak step.
struct MeterModel {
    int fock_cutoff = 40;  // meter levels 0..fock_cutoff
    double sigma = 1.0;    // pointer width, <q^2>_vacuum = sigma^2
    int system_dim = 2;
    double kappa = 1.0;
    double dt = 1e-3;
};

Mat meter_annihilator(int fock_cutoff);

// exp(sqrt(kappa dt) (L (x) a^dag - L^dag (x) a)) on system (x) meter,
// system index slow.
Mat interaction_unitary(const Mat& l, const MeterModel& meter);

// Blocks <n|U|0> for n = 0..n_max. Throws when the population leaked into
// the top five meter levels exceeds 1e-12 (cutoff too small).
std::vector<Mat> number_basis_kraus(const Mat& l, const MeterModel& meter, int n_max);

// <n|U|0> for a single n <= 3.
Mat jump_kraus_extract(const Mat& l, const MeterModel& meter, int n);

// Unit-width Hermite functions h_0..h_nmax at x (stable upward recurrence).
std::vector<double> hermite_functions(double x, int n_max);

// Pointer eigenfunctions psi_n(q; sigma) = h_n(q/(sigma sqrt 2)) / sqrt(sigma sqrt 2).
double pointer_wavefunction(int n, double q, double sigma);

std::vector<double> default_q_grid(double sigma, int n_points = 801);  // +-6 sigma

// <q|U|0> assembled from Fock blocks and pointer eigenfunctions.
std::vector<Mat> quadrature_kraus_extract(const Mat& l, const MeterModel& meter,
                                          const std::vector<double>& q_grid);

struct PhaseEquivalenceReport {
    double max_residual;  // max over the grid of ||<q|e^{-i a^dag a phi} U[L]|0> - <q|U[e^{-i phi}L]|0>||_F
};

PhaseEquivalenceReport local_oscillator_phase(const Mat& l, double phi,
                                              const MeterModel& meter);

struct SplitFormReport {
    // relative L2 over the grid of the extraction minus the factored form
    // e^{-i{X,Y} kdt/2 + iY sqrt(kappa) dW} sqrt(G) e^{-X^2 kdt + X sqrt(kappa) dW}.
    // The factored form replaces dW^2 by dt inside the reordering commutator,
    // so pointwise this residual is O(kappa dt), with a coefficient
    // proportional to [X, Y] (dW^2 - dt) that averages to zero.
    double split_residual;
    // norm of the Gaussian-weighted mean of (extraction - factored form),
    // relative to the mean factored form; the (dW^2 - dt) term integrates
    // out and this falls at least as fast as (kappa dt)^{3/2}
    double mean_residual;
    // max over the grid of ||P(q) - tr(P(q))/d|| / max_q ||P(q)||, P = E^dag E;
    // ~0 when X = 0 (every POVM element proportional to the identity)
    double povm_identity_residual;
    // max over the grid of distance of the normalized Kraus from Hermitian
    // positive form, relative to the peak; ~0 when Y = 0
    double positivity_residual;
};

// L = X + iY with X, Y Hermitian.
SplitFormReport quadrature_split_form_check(const Mat& x_obs, const Mat& y_obs,
                                            const MeterModel& meter);

// Weighted relative L2 distance between the quadrature extraction and
// sqrt(G_dt(dW)) exp(-1/2(L^dag L + L^2) kappa dt + L sqrt(kappa) dW),
// dW = sqrt(dt) q / sigma.
double quadrature_extraction_error(const Mat& l, const MeterModel& meter,
                                   const std::vector<double>& q_grid);

// trapezoid of <q|U|0>^dag <q|U|0> over the grid, distance from identity
double povm_marginal_defect(const Mat& l, const MeterModel& meter,
                            const std::vector<double>& q_grid);

}  // namespace qmi
