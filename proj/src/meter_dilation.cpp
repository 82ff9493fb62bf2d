#include "qmi/meter_dilation.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>

namespace qmi {

namespace {

double trapezoid_weight(const std::vector<double>& grid, std::size_t i) {
    const double h = grid[1] - grid[0];
    return (i == 0 || i + 1 == grid.size()) ? h / 2 : h;
}

}  // namespace

Mat meter_annihilator(int fock_cutoff) {
    const int n = fock_cutoff + 1;
    Mat a = Mat::Zero(n, n);
    for (int k = 0; k < fock_cutoff; ++k) a(k, k + 1) = std::sqrt(k + 1.0);
    return a;
}

Mat interaction_unitary(const Mat& l, const MeterModel& meter) {
    if (l.rows() != meter.system_dim)
        throw std::invalid_argument("interaction_unitary: system dimension mismatch");
    const Mat a = meter_annihilator(meter.fock_cutoff);
    const double g = std::sqrt(meter.kappa * meter.dt);
    const Mat gen = g * (Eigen::kroneckerProduct(l, Mat(a.adjoint())).eval() -
                         Eigen::kroneckerProduct(Mat(l.adjoint()), a).eval());
    return mat_exp(gen);
}

std::vector<Mat> number_basis_kraus(const Mat& l, const MeterModel& meter, int n_max) {
    const int d = meter.system_dim;
    const int nm = meter.fock_cutoff + 1;
    if (n_max > meter.fock_cutoff)
        throw std::invalid_argument("number_basis_kraus: n_max beyond cutoff");
    const Mat u = interaction_unitary(l, meter);
    auto block = [&](int n) {
        Mat m(d, d);
        for (int s = 0; s < d; ++s)
            for (int sp = 0; sp < d; ++sp) m(s, sp) = u(s * nm + n, sp * nm + 0);
        return m;
    };
    double leak = 0.0;
    for (int n = meter.fock_cutoff - 4; n <= meter.fock_cutoff; ++n)
        leak += block(n).squaredNorm();
    if (leak > 1e-12)
        throw std::runtime_error("number_basis_kraus: cutoff too small, leakage " +
                                 std::to_string(leak));
    std::vector<Mat> out;
    out.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) out.push_back(block(n));
    return out;
}

Mat jump_kraus_extract(const Mat& l, const MeterModel& meter, int n) {
    if (n < 0 || n > 3)
        throw std::invalid_argument("jump_kraus_extract: n must be in 0..3");
    return number_basis_kraus(l, meter, n).back();
}

std::vector<double> hermite_functions(double x, int n_max) {
    std::vector<double> h(n_max + 1);
    h[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int n = 1; n < n_max; ++n)
        h[n + 1] = std::sqrt(2.0 / (n + 1)) * x * h[n] -
                   std::sqrt(n / (n + 1.0)) * h[n - 1];
    return h;
}

double pointer_wavefunction(int n, double q, double sigma) {
    const double s = sigma * std::sqrt(2.0);
    return hermite_functions(q / s, n)[n] / std::sqrt(s);
}

std::vector<double> default_q_grid(double sigma, int n_points) {
    std::vector<double> q(n_points);
    for (int i = 0; i < n_points; ++i)
        q[i] = -6.0 * sigma + 12.0 * sigma * i / (n_points - 1);
    return q;
}

std::vector<Mat> quadrature_kraus_extract(const Mat& l, const MeterModel& meter,
                                          const std::vector<double>& q_grid) {
    if (q_grid.size() < 2)
        throw std::invalid_argument("quadrature_kraus_extract: grid too coarse");
    const int nmax = meter.fock_cutoff;
    const auto blocks = number_basis_kraus(l, meter, nmax);
    const double s = meter.sigma * std::sqrt(2.0);
    std::vector<Mat> out;
    out.reserve(q_grid.size());
    for (double q : q_grid) {
        const auto h = hermite_functions(q / s, nmax);
        Mat e = Mat::Zero(meter.system_dim, meter.system_dim);
        for (int n = 0; n <= nmax; ++n) e += (h[n] / std::sqrt(s)) * blocks[n];
        out.push_back(std::move(e));
    }
    return out;
}

PhaseEquivalenceReport local_oscillator_phase(const Mat& l, double phi,
                                              const MeterModel& meter) {
    const auto q_grid = default_q_grid(meter.sigma);
    const int nmax = meter.fock_cutoff;
    const auto blocks = number_basis_kraus(l, meter, nmax);
    const Mat l_rot = std::exp(-kI * phi) * l;
    const auto rotated = quadrature_kraus_extract(l_rot, meter, q_grid);
    const double s = meter.sigma * std::sqrt(2.0);
    double max_res = 0.0;
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        const auto h = hermite_functions(q_grid[i] / s, nmax);
        Mat e = Mat::Zero(meter.system_dim, meter.system_dim);
        for (int n = 0; n <= nmax; ++n)
            e += (h[n] / std::sqrt(s)) * std::exp(-kI * (phi * n)) * blocks[n];
        max_res = std::max(max_res, (e - rotated[i]).norm());
    }
    return {max_res};
}

double quadrature_extraction_error(const Mat& l, const MeterModel& meter,
                                   const std::vector<double>& q_grid) {
    const auto extracted = quadrature_kraus_extract(l, meter, q_grid);
    const double kdt = meter.kappa * meter.dt;
    const Mat drift = -0.5 * kdt * (l.adjoint() * l + l * l);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        // dW = sqrt(dt) q / sigma; the Wiener density in dW pulled back to a
        // density in q is the vacuum |psi(q)|^2, width sigma
        const double dw = std::sqrt(meter.dt) * q_grid[i] / meter.sigma;
        const double g_q = std::exp(-q_grid[i] * q_grid[i] /
                                    (2 * meter.sigma * meter.sigma)) /
                           (meter.sigma * std::sqrt(2 * M_PI));
        const Mat target =
            std::sqrt(g_q) * mat_exp(Mat(drift + std::sqrt(meter.kappa) * dw * l));
        const double w = trapezoid_weight(q_grid, i);
        num += w * (extracted[i] - target).squaredNorm();
        den += w * target.squaredNorm();
    }
    return std::sqrt(num / den);
}

double povm_marginal_defect(const Mat& l, const MeterModel& meter,
                            const std::vector<double>& q_grid) {
    const auto extracted = quadrature_kraus_extract(l, meter, q_grid);
    Mat povm = Mat::Zero(meter.system_dim, meter.system_dim);
    for (std::size_t i = 0; i < q_grid.size(); ++i)
        povm += trapezoid_weight(q_grid, i) *
                (extracted[i].adjoint() * extracted[i]);
    return (povm - Mat::Identity(meter.system_dim, meter.system_dim)).norm();
}

SplitFormReport quadrature_split_form_check(const Mat& x_obs, const Mat& y_obs,
                                            const MeterModel& meter) {
    if (herm_defect(x_obs) > 1e-12 || herm_defect(y_obs) > 1e-12)
        throw std::invalid_argument("quadrature_split_form_check: X, Y must be Hermitian");
    const Mat l = x_obs + kI * y_obs;
    const auto q_grid = default_q_grid(meter.sigma);
    const auto extracted = quadrature_kraus_extract(l, meter, q_grid);
    const double kdt = meter.kappa * meter.dt;
    const double sk = std::sqrt(meter.kappa);
    const Mat antic = x_obs * y_obs + y_obs * x_obs;

    double num = 0.0, den = 0.0;
    double peak = 0.0;
    for (const auto& e : extracted) peak = std::max(peak, e.norm());
    double povm_res = 0.0, peak_povm = 0.0, pos_res = 0.0;
    Mat mean_diff = Mat::Zero(meter.system_dim, meter.system_dim);
    Mat mean_split = Mat::Zero(meter.system_dim, meter.system_dim);
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        const double dw = std::sqrt(meter.dt) * q_grid[i] / meter.sigma;
        const double g_q = std::exp(-q_grid[i] * q_grid[i] /
                                    (2 * meter.sigma * meter.sigma)) /
                           (meter.sigma * std::sqrt(2 * M_PI));
        const Mat split =
            mat_exp(Mat(-0.5 * kI * kdt * antic + kI * sk * dw * y_obs)) *
            (std::sqrt(g_q) *
             mat_exp(Mat(-kdt * (x_obs * x_obs) + sk * dw * x_obs)));
        const double w = trapezoid_weight(q_grid, i);
        num += w * (extracted[i] - split).squaredNorm();
        den += w * split.squaredNorm();
        mean_diff += w * std::sqrt(g_q) * (extracted[i] - split);
        mean_split += w * std::sqrt(g_q) * split;

        const Mat p = extracted[i].adjoint() * extracted[i];
        peak_povm = std::max(peak_povm, p.norm());
        const Mat id = Mat::Identity(meter.system_dim, meter.system_dim);
        povm_res = std::max(
            povm_res,
            (p - (p.trace() / static_cast<double>(meter.system_dim)) * id).norm());
        pos_res = std::max(pos_res, (extracted[i] - extracted[i].adjoint()).norm() /
                                        (2 * peak));
    }
    return {std::sqrt(num / den), mean_diff.norm() / mean_split.norm(),
            povm_res / peak_povm, pos_res};
}

}  // namespace qmi
