#include "qmi/commutative.hpp"

#include <cmath>
#include <stdexcept>

namespace qmi {

double heat_kernel(double x, double t) {
    if (t <= 0) throw std::invalid_argument("heat_kernel: t must be positive");
    return std::exp(-x * x / (2 * t)) / std::sqrt(2 * M_PI * t);
}

double gaussian_quadrature_1d(const std::function<double(double)>& f, double mean,
                              double sigma) {
    // 8001 points over +-8 sigma; trapezoid error on a Gaussian-weighted
    // integrand at this spacing is far below 1e-12 relative
    constexpr int n = 8001;
    const double lo = mean - 8 * sigma;
    const double hi = mean + 8 * sigma;
    const double h = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * h;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * f(x);
    }
    return acc * h;
}

double characteristic_eigenvalue(double ell, double dt, double kappa) {
    if (dt <= 0 || kappa <= 0)
        throw std::invalid_argument("characteristic_eigenvalue: dt, kappa > 0 required");
    const double sdt = std::sqrt(dt);
    // integrand is a tilted Gaussian centered at 2 ell sqrt(kappa) dt
    const double center = 2 * ell * std::sqrt(kappa) * dt;
    return gaussian_quadrature_1d(
        [&](double w) {
            return heat_kernel(w, dt) * std::exp(2 * ell * std::sqrt(kappa) * w);
        },
        center, sdt);
}

double normalized_total(double ell, double dt, double kappa) {
    return std::exp(-2 * ell * ell * kappa * dt) *
           characteristic_eigenvalue(ell, dt, kappa);
}

double instrument_element(double r, double x, double ell) {
    return std::exp(-2 * ell * ell * r + 2 * ell * x);
}

double abelian_kraus(double r, double x, double ell) {
    return std::exp(-ell * ell * r + ell * x);
}

double ExactKod::x_profile(double x) const {
    return std::exp(-x * x / (2 * x_variance)) / std::sqrt(2 * M_PI * x_variance);
}

ExactKod exact_kod(double t, double kappa) {
    if (t <= 0 || kappa <= 0)
        throw std::invalid_argument("exact_kod: t and kappa must be positive");
    return {kappa * t, kappa * t};
}

double exact_kod_tp_integral(const ExactKod& kod, double ell) {
    const double sigma = std::sqrt(kod.x_variance);
    const double center = 2 * ell * kod.x_variance;
    return gaussian_quadrature_1d(
        [&](double x) {
            return kod.x_profile(x) * instrument_element(kod.r_slice, x, ell);
        },
        center, sigma);
}

std::vector<double> markov_apply_to_exponential(double ell, double dt, double kappa,
                                                const std::vector<double>& xs) {
    const double sk = std::sqrt(kappa);
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        out.push_back(gaussian_quadrature_1d(
            [&](double w) {
                return heat_kernel(w, dt) * std::exp(2 * ell * (x - sk * w));
            },
            -2 * ell * sk * dt, std::sqrt(dt)));
    }
    return out;
}

double GridDensity::mass() const { return values.sum() * dr * dx; }

std::vector<double> GridDensity::x_marginal() const {
    std::vector<double> m(x_grid.size());
    for (std::size_t j = 0; j < x_grid.size(); ++j)
        m[j] = values.col(static_cast<int>(j)).sum() * dr;
    return m;
}

GridDensity mollified_start(int nr, int nx, double r_min, double r_max, double x_max,
                            double x_width, double r_width) {
    if (nr < 3 || nx < 3) throw std::invalid_argument("mollified_start: grid too small");
    GridDensity g;
    g.r_grid.resize(nr);
    g.x_grid.resize(nx);
    g.dr = (r_max - r_min) / (nr - 1);
    g.dx = 2 * x_max / (nx - 1);
    for (int i = 0; i < nr; ++i) g.r_grid[i] = r_min + i * g.dr;
    for (int j = 0; j < nx; ++j) g.x_grid[j] = -x_max + j * g.dx;
    if (r_width <= 0) r_width = 2 * g.dr;
    g.values.resize(nr, nx);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nx; ++j)
            g.values(i, j) = heat_kernel(g.r_grid[i], r_width * r_width) *
                             heat_kernel(g.x_grid[j], x_width * x_width);
    g.values /= g.mass();  // unit mass on the grid
    return g;
}

GridDensity fpk_evolve(GridDensity grid, double kappa, double t_final,
                       double dt_solver, bool diffusion_on) {
    const int nr = static_cast<int>(grid.r_grid.size());
    const int nx = static_cast<int>(grid.x_grid.size());
    if (kappa * dt_solver > 0.4 * std::min(grid.dr, grid.dx * grid.dx))
        throw std::invalid_argument("fpk_evolve: CFL violation, reduce dt_solver");
    const int n_steps = static_cast<int>(std::llround(t_final / dt_solver));
    const double adv = kappa * dt_solver / grid.dr;
    const double dif = 0.5 * kappa * dt_solver / (grid.dx * grid.dx);
    Eigen::MatrixXd next(nr, nx);
    for (int s = 0; s < n_steps; ++s) {
        // upwind transport in r (velocity +kappa), zero inflow at r_min
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nx; ++j) {
                const double up = (i > 0) ? grid.values(i - 1, j) : 0.0;
                next(i, j) = grid.values(i, j) - adv * (grid.values(i, j) - up);
            }
        }
        if (diffusion_on) {
            // flux-form central diffusion in x, zero-flux walls
            for (int i = 0; i < nr; ++i) {
                for (int j = 0; j < nx; ++j) {
                    const double fe =
                        (j + 1 < nx) ? next(i, j + 1) - next(i, j) : 0.0;
                    const double fw = (j > 0) ? next(i, j) - next(i, j - 1) : 0.0;
                    grid.values(i, j) = next(i, j) + dif * (fe - fw);
                }
            }
        } else {
            grid.values = next;
        }
    }
    return grid;
}

double l1_x_marginal_vs_gaussian(const GridDensity& grid, double variance) {
    const auto marg = grid.x_marginal();
    double l1 = 0.0;
    for (std::size_t j = 0; j < grid.x_grid.size(); ++j) {
        const double x = grid.x_grid[j];
        const double g =
            std::exp(-x * x / (2 * variance)) / std::sqrt(2 * M_PI * variance);
        l1 += std::abs(marg[j] - g) * grid.dx;
    }
    return l1;
}

}  // namespace qmi
