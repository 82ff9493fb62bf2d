#include <doctest.h>

#include <cmath>
#include <vector>

#include "qmi/instrument.hpp"
#include <unsupported/Eigen/KroneckerProduct>

#include "qmi/meter_dilation.hpp"

using namespace qmi;

namespace {

double fitted_order(const std::vector<double>& dts, const std::vector<double>& errs) {
    const int n = static_cast<int>(dts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(dts[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MeterModel meter(double kdt) {
    MeterModel m;
    m.fock_cutoff = 40;
    m.sigma = 1.0;
    m.system_dim = 2;
    m.kappa = 1.0;
    m.dt = kdt;
    return m;
}

}  // namespace

TEST_SUITE("meter-dilation") {

TEST_CASE("zero coupling gives the identity unitary") {
    const Mat u = interaction_unitary(Mat::Zero(2, 2), meter(1e-3));
    CHECK(frob_dist(u, Mat::Identity(82, 82)) == 0.0);
    const auto blocks = number_basis_kraus(Mat::Zero(2, 2), meter(1e-3), 1);
    CHECK(frob_dist(blocks[0], Mat::Identity(2, 2)) == 0.0);
    CHECK(blocks[1].norm() == 0.0);
}

TEST_CASE("interaction unitary is unitary on the low-excitation sector") {
    const Mat u = interaction_unitary(sigma_minus(), meter(1e-3));
    const Mat defect = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
    // restrict to meter levels n <= cutoff - 5
    const int nm = 41, keep = nm - 5;
    double max_entry = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int n = 0; n < keep; ++n)
            for (int sp = 0; sp < 2; ++sp)
                for (int np = 0; np < keep; ++np)
                    max_entry = std::max(max_entry,
                                         std::abs(defect(s * nm + n, sp * nm + np)));
    CHECK(max_entry < 1e-9);
}

TEST_CASE("unitary matches its normally ordered split form to order 3/2") {
    // comparison restricted to the vacuum column: at high meter levels the
    // expansion parameter sqrt(kdt * n) is no longer small
    const Mat l = sigma_minus();
    std::vector<double> kdts = {1e-2, 1e-3, 1e-4}, errs;
    for (double kdt : kdts) {
        const MeterModel m = meter(kdt);
        const Mat a = meter_annihilator(m.fock_cutoff);
        const Mat ad = a.adjoint();
        const double g = std::sqrt(kdt);
        const Mat u = interaction_unitary(l, m);
        const Mat ldag_l = l.adjoint() * l;
        const Mat comm_ll = l * l.adjoint() - ldag_l;
        const Mat split =
            mat_exp(Mat(g * Eigen::kroneckerProduct(l, ad).eval())) *
            mat_exp(Mat(-g * Eigen::kroneckerProduct(Mat(l.adjoint()), a).eval())) *
            mat_exp(Mat(0.5 * kdt *
                        Eigen::kroneckerProduct(comm_ll, Mat(ad * a)).eval())) *
            mat_exp(Mat(-0.5 * kdt *
                        Eigen::kroneckerProduct(ldag_l,
                                                Mat::Identity(41, 41)).eval()));
        const Mat diff = u - split;
        double e2 = 0.0;
        for (int r = 0; r < diff.rows(); ++r)
            for (int sp = 0; sp < 2; ++sp) e2 += std::norm(diff(r, sp * 41));
        errs.push_back(std::sqrt(e2));
    }
    CHECK(fitted_order(kdts, errs) >= 1.4);
}

TEST_CASE("number-basis completeness from unitarity") {
    const auto blocks = number_basis_kraus(sigma_minus(), meter(1e-3), 40);
    Mat sum = Mat::Zero(2, 2);
    for (const auto& b : blocks) sum += b.adjoint() * b;
    CHECK((sum - Mat::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("cutoff too small is reported with the measured leakage") {
    MeterModel m = meter(0.05);
    m.fock_cutoff = 3;
    CHECK_THROWS_AS(number_basis_kraus(sigma_minus(), m, 2), std::runtime_error);
}

TEST_CASE("jump extraction recovers the weak jump factors") {
    const Mat l = sigma_minus();
    std::vector<double> kdts = {1e-2, 1e-3, 1e-4};
    std::vector<double> e0, e1, n2;
    for (double kdt : kdts) {
        const auto blocks = number_basis_kraus(l, meter(kdt), 2);
        e0.push_back(
            (blocks[0] - mat_exp(Mat(-0.5 * kdt * (l.adjoint() * l)))).norm());
        e1.push_back((blocks[1] - std::sqrt(kdt) * l).norm());
        n2.push_back(blocks[2].norm());
    }
    CHECK(fitted_order(kdts, e0) >= 1.8);
    CHECK(fitted_order(kdts, e1) >= 1.4);
    // sigma_minus squares to zero, so the two-jump block vanishes identically
    CHECK(n2[1] < 1e-12);
}

TEST_CASE("jump extraction rejects n beyond 3") {
    CHECK_THROWS_AS(jump_kraus_extract(sigma_minus(), meter(1e-3), 4),
                    std::invalid_argument);
}

TEST_CASE("dilated jump instrument matches jump_weak at order 3/2") {
    const Mat l = sigma_minus();
    std::vector<double> kdts = {1e-2, 1e-3}, errs;
    for (double kdt : kdts) {
        const auto blocks = number_basis_kraus(l, meter(kdt), 2);
        Instrument dilated;
        dilated.dim = 2;
        for (const auto& b : blocks) dilated.atoms.push_back({1.0, b});
        const SuperOp lhs = total_operation(dilated);
        const SuperOp rhs = total_operation(jump_weak(l, 1.0, kdt));
        errs.push_back(frob_dist(lhs, rhs));
    }
    CHECK(errs[1] < errs[0] / 15);  // at least order 3/2 shrinkage per decade
}

TEST_CASE("hermite functions are orthonormal under the trapezoid rule") {
    const auto q = default_q_grid(1.0, 2001);
    const double h = q[1] - q[0];
    double n00 = 0, n55 = 0, x05 = 0;
    for (double qi : q) {
        const auto hf = hermite_functions(qi, 5);
        n00 += hf[0] * hf[0] * h;
        n55 += hf[5] * hf[5] * h;
        x05 += hf[0] * hf[5] * h;
    }
    CHECK(std::abs(n00 - 1.0) < 1e-8);
    CHECK(std::abs(n55 - 1.0) < 1e-6);
    CHECK(std::abs(x05) < 1e-8);
}

TEST_CASE("zero coupling quadrature extraction is the vacuum wavefunction") {
    const MeterModel m = meter(1e-3);
    const auto q = default_q_grid(m.sigma, 101);
    const auto e = quadrature_kraus_extract(Mat::Zero(2, 2), m, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double psi0 = pointer_wavefunction(0, q[i], m.sigma);
        CHECK((e[i] - psi0 * Mat::Identity(2, 2)).norm() < 1e-13);
    }
}

TEST_CASE("quadrature extraction matches the diffusive Kraus form") {
    const Mat l = 0.5 * pauli_z();
    const MeterModel m = meter(1e-3);
    CHECK(quadrature_extraction_error(l, m, default_q_grid(m.sigma)) < 1e-3);
}

TEST_CASE("POVM marginal resolves the identity") {
    const MeterModel m = meter(1e-3);
    CHECK(povm_marginal_defect(Mat(0.5 * pauli_z()), m, default_q_grid(m.sigma)) <
          1e-8);
    CHECK(povm_marginal_defect(sigma_minus(), m, default_q_grid(m.sigma)) < 1e-8);
}

TEST_CASE("local oscillator phase rotates the Lindblad operator") {
    const MeterModel m = meter(1e-3);
    CHECK(local_oscillator_phase(sigma_minus(), 0.0, m).max_residual < 1e-14);
    CHECK(local_oscillator_phase(sigma_minus(), M_PI / 2, m).max_residual < 1e-8);
    CHECK(local_oscillator_phase(sigma_minus(), 2 * M_PI, m).max_residual < 1e-8);
    CHECK(local_oscillator_phase(Mat(0.5 * pauli_x()), 1.1, m).max_residual < 1e-8);
}

TEST_CASE("hermitian L gives positive extracted Kraus") {
    const auto rep =
        quadrature_split_form_check(Mat(0.5 * pauli_x()), Mat::Zero(2, 2), meter(1e-3));
    CHECK(rep.positivity_residual < 1e-8);
}

TEST_CASE("antihermitian L gives POVM elements proportional to the identity") {
    const auto rep =
        quadrature_split_form_check(Mat::Zero(2, 2), Mat(0.5 * pauli_y()), meter(1e-3));
    CHECK(rep.povm_identity_residual < 1e-6);
}

TEST_CASE("split form residual decreases at order 3/2 in the mean") {
    // the pointwise residual carries a [X,Y](dW^2 - dt) term of first order
    // whose Gaussian mean vanishes; the averaged residual shows the 3/2 rate
    std::vector<double> kdts = {1e-2, 1e-3, 1e-4}, point_errs, mean_errs;
    for (double kdt : kdts) {
        const auto rep = quadrature_split_form_check(Mat(0.5 * pauli_x()),
                                                     Mat(0.5 * pauli_y()), meter(kdt));
        point_errs.push_back(rep.split_residual);
        mean_errs.push_back(rep.mean_residual);
    }
    CHECK(fitted_order(kdts, mean_errs) >= 1.4);
    CHECK(fitted_order(kdts, point_errs) >= 0.9);  // first order, pointwise
}

}  // TEST_SUITE

TEST_SUITE("meter-dilation") {

TEST_CASE("dilated quadrature instrument matches diffusive_weak") {
    const Mat l = sigma_minus();
    std::vector<double> kdts = {1e-2, 1e-3}, errs;
    for (double kdt : kdts) {
        const MeterModel m = meter(kdt);
        const auto q = default_q_grid(m.sigma);
        const auto extracted = quadrature_kraus_extract(l, m, q);
        const double h = q[1] - q[0];
        SuperOp dilated = SuperOp::zero(2);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double w = (i == 0 || i + 1 == q.size()) ? h / 2 : h;
            dilated += sandwich(extracted[i], extracted[i]) * w;
        }
        const SuperOp weak = total_operation(diffusive_weak(l, 1.0, kdt, 21));
        errs.push_back(frob_dist(dilated, weak));
    }
    CHECK(errs[1] < errs[0] / 15);  // at least order 3/2 shrinkage per decade
    CHECK(errs[1] < 1e-4);
}

}  // TEST_SUITE
