#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace qmi {

// One-dimensional diffusion as the exactly solvable model of a measuring
// process: group R, representation label ell, Markov kernel G_dt.

// G_t(x) = e^{-x^2/2t} / sqrt(2 pi t); throws for t <= 0.
double heat_kernel(double x, double t);

// Quadrature of int d(dW) G_dt(dW) e^{2 ell sqrt(kappa) dW}; equals
// e^{2 ell^2 kappa dt}.
double characteristic_eigenvalue(double ell, double dt, double kappa);

// Quadrature of int d(dW) G_dt(dW) e^{-2 ell^2 kappa dt + 2 ell sqrt(kappa) dW};
// equals 1 (trace preservation in the ell-representation).
double normalized_total(double ell, double dt, double kappa);

// O_{r,x} evaluated in the ell-representation: e^{-2 ell^2 r + 2 ell x}.
double instrument_element(double r, double x, double ell);

// K_{r,x} = e^{-ell^2 r + ell x}; instrument_element is its square.
double abelian_kraus(double r, double x, double ell);

// Closed-form density at time t: a delta slice at r = kappa t carrying a
// centered Gaussian x-profile of variance kappa t.
struct ExactKod {
    double r_slice;
    double x_variance;
    double x_profile(double x) const;
};

ExactKod exact_kod(double t, double kappa);

// int dx profile(x) e^{-2 ell^2 r + 2 ell x} over the slice; equals 1.
double exact_kod_tp_integral(const ExactKod& kod, double ell);

// Markov step applied to f(x) = e^{2 ell x} evaluated on a grid of points;
// returns int d(dW) G_dt(dW) f(x - sqrt(kappa) dW) per point.
std::vector<double> markov_apply_to_exponential(double ell, double dt, double kappa,
                                                const std::vector<double>& xs);

// Density on a uniform (r, x) grid; values indexed [i_r][i_x] row-major as an
// Eigen matrix row = r index.
struct GridDensity {
    std::vector<double> r_grid;
    std::vector<double> x_grid;
    Eigen::MatrixXd values;
    double dr = 0;
    double dx = 0;

    double mass() const;
    std::vector<double> x_marginal() const;  // integrated over r
};

// Product of a narrow r-mollifier at r = 0 (width r_width, defaults to 2 dr)
// and a Gaussian x-profile of standard deviation x_width.
GridDensity mollified_start(int nr, int nx, double r_min, double r_max, double x_max,
                            double x_width, double r_width = -1.0);

// Forward evolution under kappa(-d_r + 1/2 d_x^2): conservative upwind
// transport in r, flux-form central diffusion in x, explicit Euler in time.
// Enforces kappa dt <= 0.4 min(dr, dx^2). diffusion_on = false drops the
// x-diffusion (pure transport).
GridDensity fpk_evolve(GridDensity grid, double kappa, double t_final,
                       double dt_solver, bool diffusion_on = true);

double l1_x_marginal_vs_gaussian(const GridDensity& grid, double variance);

// Trapezoid quadrature against a +-8 sigma window around the growth-shifted
// center; spacing fine enough that tails contribute below 1e-12.
double gaussian_quadrature_1d(const std::function<double(double)>& f, double mean,
                              double sigma);

}  // namespace qmi
