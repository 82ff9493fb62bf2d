#include "qmi/group_analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace qmi {

RepPoint random_rep_point(int dim, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Mat k = random_ginibre(dim, rng);
        if (std::abs(k.determinant()) > 1e-12) return {std::move(k)};
    }
    throw std::runtime_error("random_rep_point: could not draw an invertible matrix");
}

namespace {

void check_h(double h) {
    if (h < 1e-6 || h > 1e-2)
        throw std::invalid_argument("invariant derivative: h must be in [1e-6, 1e-2]");
}

}  // namespace

Mat right_inv_derivative_kraus(const Mat& direction, const RepPoint& x, double h) {
    check_h(h);
    const Mat fwd = mat_exp(Mat(h * direction)) * x.kraus;
    const Mat bwd = mat_exp(Mat(-h * direction)) * x.kraus;
    return (fwd - bwd) / (2 * h);
}

SuperOp right_inv_derivative_superop(const Mat& direction, const RepPoint& x,
                                     double h) {
    check_h(h);
    const Mat fwd = mat_exp(Mat(h * direction)) * x.kraus;
    const Mat bwd = mat_exp(Mat(-h * direction)) * x.kraus;
    return (sandwich(fwd, fwd) - sandwich(bwd, bwd)) * (1.0 / (2 * h));
}

SuperOp left_right_mult(const Mat& m) {
    const Mat id = Mat::Identity(m.rows(), m.cols());
    return sandwich(m, id) + sandwich(id, m);
}

double translation_intertwining_residual(const RepPoint& g, const RepPoint& x) {
    const SuperOp lhs = sandwich(g.kraus * x.kraus, g.kraus * x.kraus);
    const SuperOp rhs = sandwich(g.kraus, g.kraus).compose(sandwich(x.kraus, x.kraus));
    return frob_dist(lhs, rhs);
}

double adjoint_intertwining_residual(const RepPoint& x) {
    const SuperOp lhs = hs_adjoint(sandwich(x.kraus, x.kraus));
    const SuperOp rhs = sandwich(Mat(x.kraus.adjoint()), Mat(x.kraus.adjoint()));
    return frob_dist(lhs, rhs);
}

double generator_intertwining_residual(const Mat& l, const RepPoint& x,
                                       ProcessKind kind) {
    return generator_intertwining_residual(std::vector<Mat>{l}, x, kind);
}

double generator_intertwining_residual(const std::vector<Mat>& ls, const RepPoint& x,
                                       ProcessKind kind) {
    const int d = static_cast<int>(x.kraus.rows());
    SuperOp gen = SuperOp::zero(d);
    for (const Mat& l : ls) {
        const Mat ldl = l.adjoint() * l;
        if (kind == ProcessKind::jump) {
            gen += left_right_mult(ldl) * (-0.5) + sandwich(l, l);
        } else {
            const SuperOp xr_l = left_right_mult(l);
            gen += left_right_mult(Mat(ldl + l * l)) * (-0.5) +
                   xr_l.compose(xr_l) * 0.5;
        }
    }
    const SuperOp ox = sandwich(x.kraus, x.kraus);
    return frob_dist(gen.compose(ox), lindblad_dissipator(ls).compose(ox));
}

WeakCommutatorResidual weak_commutator_residual(const Mat& l, const Mat& m, double dw,
                                                double dv, double kappa, double dt) {
    const double kdt = kappa * dt;
    const double sk = std::sqrt(kappa);
    const Mat kl = mat_exp(Mat(-0.5 * kdt * (l.adjoint() * l + l * l) + sk * dw * l));
    const Mat km = mat_exp(Mat(-0.5 * kdt * (m.adjoint() * m + m * m) + sk * dv * m));
    const Mat comm = (kl * km).inverse() * (km * kl);
    const Mat bch = mat_exp(Mat((m * l - l * m) * (kappa * dv * dw)));
    const Mat id = Mat::Identity(l.rows(), l.cols());
    return {(comm - bch).norm(), (comm - id).norm()};
}

AbelianCoord abelian_coordinates(const Mat& l, const MeasurementRecord& record,
                                 double kappa) {
    if (herm_defect(l) > 1e-10)
        throw std::invalid_argument(
            "abelian_coordinates: only Hermitian Lindblad operators supported");
    if (record.kind != RecordKind::wiener || record.n_channels != 1)
        throw std::invalid_argument(
            "abelian_coordinates: needs a single-channel Wiener record");
    double sum_dw = 0.0;
    for (double v : record.increments) sum_dw += v;
    return {kappa * record.n_steps * record.dt, std::sqrt(kappa) * sum_dw};
}

double Histogram::total_mass() const {
    double m = 0.0;
    for (double v : density) m += v * bin_width;
    return m;
}

Histogram kod_histogram(const std::vector<double>& samples, int bins,
                        double half_width) {
    if (bins < 3 || bins % 2 == 0)
        throw std::invalid_argument("kod_histogram: bin count must be odd and >= 3");
    Histogram h;
    h.bin_width = 2.0 * half_width / bins;
    h.midpoints.resize(bins);
    h.density.assign(bins, 0.0);
    const int half = bins / 2;
    for (int i = 0; i < bins; ++i) h.midpoints[i] = (i - half) * h.bin_width;
    std::size_t inside = 0;
    for (double s : samples) {
        const int idx = half + static_cast<int>(std::lround(s / h.bin_width));
        if (idx >= 0 && idx < bins) {
            h.density[idx] += 1.0;
            ++inside;
        }
    }
    // normalize to unit mass over the window
    if (inside > 0)
        for (double& v : h.density) v /= static_cast<double>(inside) * h.bin_width;
    return h;
}

double histogram_l1_to_gaussian(const Histogram& h, double variance) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < h.midpoints.size(); ++i) {
        const double x = h.midpoints[i];
        const double g = std::exp(-x * x / (2 * variance)) /
                         std::sqrt(2 * M_PI * variance);
        l1 += std::abs(h.density[i] - g) * h.bin_width;
    }
    return l1;
}

Histogram convolve_histograms(const Histogram& a, const Histogram& b) {
    if (a.midpoints.size() != b.midpoints.size() ||
        std::abs(a.bin_width - b.bin_width) > 1e-12)
        throw std::invalid_argument("convolve_histograms: grids must match");
    const int bins = static_cast<int>(a.midpoints.size());
    const int half = bins / 2;
    Histogram out;
    out.bin_width = a.bin_width;
    out.midpoints = a.midpoints;
    out.density.assign(bins, 0.0);
    for (int k = -half; k <= half; ++k) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const int i = k - j;
            if (i < -half || i > half) continue;
            acc += a.density[j + half] * b.density[i + half];
        }
        out.density[k + half] = acc * a.bin_width;
    }
    return out;
}

double histogram_l1_distance(const Histogram& a, const Histogram& b) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < a.density.size(); ++i)
        l1 += std::abs(a.density[i] - b.density[i]) * a.bin_width;
    return l1;
}

}  // namespace qmi
