#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "qmi/affine.hpp"
#include "qmi/finite_group.hpp"

using namespace qmi;

namespace {

// brute-force associativity oracle: both bracketings as explicit double sums
CVec convolve_brute(const FiniteGroup& g, const CVec& a, const CVec& b) {
    CVec out = CVec::Zero(g.order());
    for (int y = 0; y < g.order(); ++y)
        for (int x = 0; x < g.order(); ++x)
            out(g.mul(y, x)) += a(y) * b(x);
    return out;
}

}  // namespace

TEST_SUITE("iga-lab") {

TEST_CASE("built-in groups pass the construction checks") {
    CHECK(FiniteGroup::z2().order() == 2);
    CHECK(FiniteGroup::s3().order() == 6);
    CHECK(FiniteGroup::q8().order() == 8);
    CHECK(FiniteGroup::s3().identity() == 0);
}

TEST_CASE("corrupted tables are rejected") {
    // break associativity/identity by flipping one entry of Z2 x Z2-like table
    CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::from_table({{1, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("tables load from the plain-text format") {
    std::istringstream in("2\n0 1\n1 0\n");
    const FiniteGroup g = FiniteGroup::from_table(in);
    CHECK(g.order() == 2);
    CHECK(g.mul(1, 1) == 0);
}

TEST_CASE("delta at the identity is the convolution unit") {
    const FiniteGroup s3 = FiniteGroup::s3();
    Rng rng(90);
    const auto f = random_element(s3, rng);
    const auto e = delta_at(s3, s3.identity());
    CHECK((convolve_fg(e, f).coeffs - f.coeffs).norm() == 0.0);
    CHECK((convolve_fg(f, e).coeffs - f.coeffs).norm() == 0.0);
}

TEST_CASE("Z2 convolution by hand enumeration") {
    const FiniteGroup z2 = FiniteGroup::z2();
    GroupAlgebraElement g{&z2, CVec(2)}, f{&z2, CVec(2)};
    g.coeffs << Cplx(2, 1), Cplx(-1, 0);   // [a, b]
    f.coeffs << Cplx(0.5, 0), Cplx(3, -2); // [c, d]
    const auto conv = convolve_fg(g, f);
    CHECK(std::abs(conv.coeffs(0) - (g.coeffs(0) * f.coeffs(0) +
                                     g.coeffs(1) * f.coeffs(1))) == 0.0);
    CHECK(std::abs(conv.coeffs(1) - (g.coeffs(0) * f.coeffs(1) +
                                     g.coeffs(1) * f.coeffs(0))) == 0.0);
}

TEST_CASE("convolution is associative and matches the brute-force sum") {
    const FiniteGroup s3 = FiniteGroup::s3();
    Rng rng(91);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_element(s3, rng);
        const auto b = random_element(s3, rng);
        const auto c = random_element(s3, rng);
        CHECK((convolve_fg(a, b).coeffs - convolve_brute(s3, a.coeffs, b.coeffs))
                  .norm() < 1e-13);
        const auto left = convolve_fg(convolve_fg(a, b), c);
        const auto right = convolve_fg(a, convolve_fg(b, c));
        CHECK((left.coeffs - right.coeffs).norm() < 1e-13);
    }
}

TEST_CASE("group mismatch is rejected") {
    const FiniteGroup z2 = FiniteGroup::z2();
    const FiniteGroup z2b = FiniteGroup::z2();
    const auto f = delta_at(z2, 0);
    const auto g = delta_at(z2b, 0);
    CHECK_THROWS_AS(convolve_fg(f, g), std::invalid_argument);
}

TEST_CASE("left translations form a stochastic permutation representation") {
    const FiniteGroup q8 = FiniteGroup::q8();
    CHECK((left_translation_matrix(q8, q8.identity()) -
           Eigen::MatrixXd::Identity(8, 8)).norm() == 0.0);
    // quaternion table: L_i L_j = L_k (elements 2 and 4 compose to 6)
    CHECK((left_translation_matrix(q8, 2) * left_translation_matrix(q8, 4) -
           left_translation_matrix(q8, q8.mul(2, 4))).norm() == 0.0);
    CHECK(q8.mul(2, 4) == 6);
    for (int a = 0; a < 8; ++a) {
        const auto m = left_translation_matrix(q8, a);
        for (int col = 0; col < 8; ++col) CHECK(m.col(col).sum() == 1.0);
        // Kolmogorov adjoint is the inverse translation
        CHECK((kolmogorov_adjoint(m) - left_translation_matrix(q8, q8.inv(a)))
                  .norm() == 0.0);
    }
    // stochasticity preserves the 1-norm of nonnegative densities
    Rng rng(92);
    Eigen::VectorXd dens(8);
    for (int i = 0; i < 8; ++i) dens(i) = rng.uniform();
    const Eigen::VectorXd moved = left_translation_matrix(q8, 3) * dens;
    CHECK(std::abs(moved.lpNorm<1>() - dens.lpNorm<1>()) < 1e-14);
}

TEST_CASE("translation homomorphism over the whole table") {
    const FiniteGroup s3 = FiniteGroup::s3();
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            CHECK((left_translation_matrix(s3, a) * left_translation_matrix(s3, b) -
                   left_translation_matrix(s3, s3.mul(a, b))).norm() == 0.0);
}

TEST_CASE("left-convolution ultraoperators represent the algebra") {
    const FiniteGroup s3 = FiniteGroup::s3();
    const auto e = delta_at(s3, s3.identity());
    CHECK((left_convolution_ultraop(e) - Eigen::MatrixXcd::Identity(6, 6)).norm() ==
          0.0);
    Rng rng(93);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_element(s3, rng);
        const auto f = random_element(s3, rng);
        const Eigen::MatrixXcd lhs =
            left_convolution_ultraop(g) * left_convolution_ultraop(f);
        const Eigen::MatrixXcd rhs = left_convolution_ultraop(convolve_fg(g, f));
        CHECK((lhs - rhs).norm() < 1e-13);
    }
}

TEST_CASE("ultraoperator adjoint represents the Gelfand involution") {
    const FiniteGroup q8 = FiniteGroup::q8();
    Rng rng(94);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_element(q8, rng);
        const auto lhs = kolmogorov_adjoint(Eigen::MatrixXcd(left_convolution_ultraop(f)));
        const auto rhs = left_convolution_ultraop(gelfand(f));
        CHECK((lhs - rhs).norm() < 1e-13);
    }
}

TEST_CASE("gelfand is an involution and an anti-homomorphism") {
    const FiniteGroup s3 = FiniteGroup::s3();
    Rng rng(95);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_element(s3, rng);
        const auto g = random_element(s3, rng);
        CHECK((gelfand(gelfand(f)).coeffs - f.coeffs).norm() == 0.0);
        const auto lhs = gelfand(convolve_fg(g, f));
        const auto rhs = convolve_fg(gelfand(f), gelfand(g));
        CHECK((lhs.coeffs - rhs.coeffs).norm() < 1e-13);
    }
}

TEST_CASE("cartan through the inverse map coincides with gelfand for unitary reps") {
    // for unitary representations x^dag = x^-1, a degeneracy of the
    // finite-group model
    const FiniteGroup q8 = FiniteGroup::q8();
    const auto dag = inverse_dagger_map(q8);
    Rng rng(96);
    const auto f = random_element(q8, rng);
    CHECK((cartan(f, dag).coeffs - gelfand(f).coeffs).norm() == 0.0);
    const auto g = random_element(q8, rng);
    const auto lhs = cartan(convolve_fg(g, f), dag);
    const auto rhs = convolve_fg(cartan(f, dag), cartan(g, dag));
    CHECK((lhs.coeffs - rhs.coeffs).norm() < 1e-13);
}

TEST_CASE("non-involutive dagger maps are rejected") {
    const FiniteGroup s3 = FiniteGroup::s3();
    Rng rng(97);
    const auto f = random_element(s3, rng);
    std::vector<int> bad = {1, 2, 0, 3, 4, 5};  // a 3-cycle, not an involution
    CHECK_THROWS_AS(cartan(f, bad), std::invalid_argument);
}

TEST_CASE("representations validate exhaustively") {
    validate_rep(FiniteGroup::z2(), z2_sign_rep());
    validate_rep(FiniteGroup::s3(), s3_irrep_2d());
    validate_rep(FiniteGroup::q8(), q8_irrep_2d());
    auto broken = s3_irrep_2d();
    broken[3] = -broken[3];
    CHECK_THROWS_AS(validate_rep(FiniteGroup::s3(), broken), std::invalid_argument);
}

TEST_CASE("superoperator representation of the group algebra") {
    const FiniteGroup s3 = FiniteGroup::s3();
    const auto rep = s3_irrep_2d();
    const auto e = delta_at(s3, s3.identity());
    CHECK(frob_dist(iga_superop_rep(e, s3, rep), SuperOp::identity(2)) < 1e-14);
    Rng rng(98);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_element(s3, rng);
        const auto f = random_element(s3, rng);
        const SuperOp lhs = iga_superop_rep(g, s3, rep).compose(iga_superop_rep(f, s3, rep));
        const SuperOp rhs = iga_superop_rep(convolve_fg(g, f), s3, rep);
        CHECK(frob_dist(lhs, rhs) < 1e-13);
    }
}

TEST_CASE("hilbert-schmidt adjoint represents the Cartan involution") {
    const FiniteGroup q8 = FiniteGroup::q8();
    const auto rep = q8_irrep_2d();
    const auto dag = inverse_dagger_map(q8);
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_element(q8, rng);
        const SuperOp lhs = hs_adjoint(iga_superop_rep(f, q8, rep));
        const SuperOp rhs = iga_superop_rep(cartan(f, dag), q8, rep);
        CHECK(frob_dist(lhs, rhs) < 1e-13);
    }
}

TEST_CASE("uniform function represents an idempotent channel") {
    const FiniteGroup q8 = FiniteGroup::q8();
    const auto u = uniform_element(q8);
    // uniform * uniform = uniform under counting-measure convolution
    CHECK((convolve_fg(u, u).coeffs - u.coeffs).norm() < 1e-15);
    const SuperOp z = iga_superop_rep(u, q8, q8_irrep_2d());
    CHECK(frob_dist(z.compose(z), z) < 1e-14);
}

TEST_CASE("finite-group delta identities hold exactly") {
    const FiniteGroup s3 = FiniteGroup::s3();
    Rng rng(100);
    const auto f = random_element(s3, rng);
    const auto g = random_element(s3, rng);
    const int e = s3.identity();
    // inversion symmetry: delta(x^-1) = delta(x)
    for (int x = 0; x < 6; ++x)
        CHECK((delta_at(s3, e).coeffs(s3.inv(x)) == delta_at(s3, e).coeffs(x)));
    // conjugation invariance (counting measure is unimodular: factor is 1)
    for (int h = 0; h < 6; ++h) {
        Cplx acc = 0.0;
        for (int x = 0; x < 6; ++x)
            acc += delta_at(s3, e).coeffs(s3.mul(s3.mul(h, x), s3.inv(h))) *
                   f.coeffs(x);
        CHECK(std::abs(acc - f.coeffs(e)) == 0.0);
    }
    // translation: sum_x delta(x0^-1 x) f(x) = f(x0)
    for (int x0 = 0; x0 < 6; ++x0) {
        Cplx acc = 0.0;
        for (int x = 0; x < 6; ++x)
            acc += delta_at(s3, e).coeffs(s3.mul(s3.inv(x0), x)) * f.coeffs(x);
        CHECK(std::abs(acc - f.coeffs(x0)) == 0.0);
    }
    // trikernel: sum_{y,x} delta((yx)^-1 z) g(y) f(x) = (g*f)(z)
    const auto conv = convolve_fg(g, f);
    for (int z = 0; z < 6; ++z) {
        Cplx acc = 0.0;
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 6; ++x)
                acc += delta_at(s3, e).coeffs(s3.mul(s3.inv(s3.mul(y, x)), z)) *
                       g.coeffs(y) * f.coeffs(x);
        CHECK(std::abs(acc - conv.coeffs(z)) < 1e-13);
    }
}

// ---- affine group ----

TEST_CASE("affine composition, inverse, and adjoint") {
    const AffineElement g{2.0, 1.0}, h{0.5, -3.0};
    const AffineElement gh = affine_mul(g, h);
    CHECK(gh.a == doctest::Approx(1.0));
    CHECK(gh.b == doctest::Approx(2.0 * -3.0 + 1.0));
    const AffineElement gi = affine_inv(g);
    const AffineElement e = affine_mul(g, gi);
    CHECK(e.a == doctest::Approx(1.0));
    CHECK(e.b == doctest::Approx(0.0));
    CHECK_THROWS_AS(affine_mul({-1.0, 0.0}, g), std::invalid_argument);
}

TEST_CASE("modular function from the adjoint determinant") {
    CHECK(modular_function(affine_identity()) == doctest::Approx(1.0));
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const AffineElement x{std::exp(rng.gaussian()), 2 * rng.gaussian()};
        const AffineElement y{std::exp(rng.gaussian()), 2 * rng.gaussian()};
        const double lhs = modular_function(affine_mul(x, y));
        const double rhs = modular_function(x) * modular_function(y);
        CHECK(std::abs(lhs - rhs) / rhs < 1e-14);
    }
    // independent of the translation part
    for (int b = -5; b <= 5; ++b)
        CHECK(modular_function({2.0, static_cast<double>(b)}) ==
              doctest::Approx(modular_function({2.0, 0.0})));
}

TEST_CASE("haar invariance of the candidate densities") {
    const AffineFn f = affine_bump(0.2, -0.5, 1.0);
    const AffineElement g0{2.0, 1.0};
    const auto left = haar_invariance_check(HaarSide::left, g0, f);
    CHECK(left.translation_residual < 1e-6);
    CHECK(left.quasi_invariance_residual < 1e-6);
    const auto right = haar_invariance_check(HaarSide::right, g0, f);
    CHECK(right.translation_residual < 1e-6);
    CHECK(right.quasi_invariance_residual < 1e-6);
    // identity translation leaves everything fixed
    const auto trivial = haar_invariance_check(HaarSide::left, affine_identity(), f);
    CHECK(trivial.translation_residual < 1e-15);
}

TEST_CASE("support leak is detected") {
    const AffineFn wide = [](const AffineElement& x) {
        return std::exp(-0.01 * x.b * x.b);  // does not vanish at the window edge
    };
    CHECK_THROWS_AS(haar_invariance_check(HaarSide::left, {2.0, 0.0}, wide),
                    std::runtime_error);
}

TEST_CASE("mollified delta: translation picks out the evaluation point") {
    const AffineFn f = affine_bump(0.0, 0.0, 2.5);
    const AffineElement x0{1.3, 0.4};
    const auto rep = delta_identity_check(DeltaIdentity::translation, 1e-2, x0, f);
    CHECK(rep.residual < 1e-3);
}

TEST_CASE("mollified delta: inversion symmetry with residual order >= 1") {
    // asymmetric smooth test function so the leading error term is visible
    const AffineFn f = [](const AffineElement& x) {
        const double la = std::log(x.a);
        return std::exp(0.8 * la + 0.5 * x.b - 0.1 * la * x.b);
    };
    std::vector<double> ws = {1e-2, 3e-3, 1e-3}, errs;
    for (double w : ws) {
        const auto rep =
            delta_identity_check(DeltaIdentity::inversion, w, affine_identity(), f);
        errs.push_back(std::max(rep.residual, 1e-16));
    }
    // order fit in the mollifier width
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        sx += std::log(ws[i]);
        sy += std::log(errs[i]);
        sxx += std::log(ws[i]) * std::log(ws[i]);
        sxy += std::log(ws[i]) * std::log(errs[i]);
    }
    const double order = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    CHECK(order >= 1.0);
    CHECK(errs.back() < 1e-4);
}

TEST_CASE("mollified delta: conjugation recovers the modular factor") {
    const AffineFn f = [](const AffineElement& x) {
        const double la = std::log(x.a);
        return 1.0 + 0.3 * la + 0.2 * x.b + 0.1 * la * la;
    };
    const AffineElement g0{2.0, 0.0};
    const auto rep = delta_identity_check(DeltaIdentity::conjugation, 1e-3, g0, f);
    // integral -> f(e)/Delta(g0) = 1/2 within 1%
    CHECK(std::abs(rep.value - 0.5) / 0.5 < 0.01);
    CHECK(rep.residual < 0.01);
}

TEST_CASE("mollified delta: trikernel reproduces the convolution") {
    const AffineFn g = affine_bump(0.3, 0.4, 0.7);
    const AffineFn f = affine_bump(-0.2, -0.3, 0.6);
    const AffineElement z{1.1, 0.2};
    const auto coarse =
        delta_identity_check(DeltaIdentity::trikernel, 0.3, affine_identity(), f, g, z);
    const auto fine =
        delta_identity_check(DeltaIdentity::trikernel, 0.15, affine_identity(), f, g, z);
    CHECK(fine.residual < coarse.residual / 2);
    CHECK(fine.residual < 0.15);
}

TEST_CASE("gelfand unimodularity witnesses") {
    const auto rep = gelfand_unimodularity_witness();
    // the convolution-level anti-homomorphism survives non-unimodularity;
    // the deviation is pure quadrature error
    CHECK(rep.convolution_residual < 1e-3);
    // the representation property and the 1-norm isometry genuinely fail
    CHECK(rep.representation_residual >= 0.1);
    CHECK(rep.isometry_deviation >= 0.1);
}

}  // TEST_SUITE
