#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qmi {

// x -> a*x + b with a > 0; the minimal non-unimodular testbed.
struct AffineElement {
    double a = 1.0;
    double b = 0.0;
};

AffineElement affine_mul(const AffineElement& later, const AffineElement& earlier);
AffineElement affine_inv(const AffineElement& g);
AffineElement affine_identity();

// Adjoint action on the (scaling, translation) Lie algebra basis.
Eigen::Matrix2d affine_adjoint_matrix(const AffineElement& g);

// |det Ad_g|; multiplicative, independent of b.
double modular_function(const AffineElement& g);

using AffineFn = std::function<double(const AffineElement&)>;

// Smooth bump in (log a, b) coordinates, compactly supported in the ball of
// the given radius around the center.
AffineFn affine_bump(double center_log_a, double center_b, double radius);

enum class HaarSide { left, right };

// Quadrature weights: candidate densities 1/a^2 (left) and 1/a (right)
// with respect to da db, integrated on a (log a, b) grid.
struct AffineQuadrature {
    double log_a_max = 4.0;
    double b_max = 12.0;
    int n_log_a = 801;
    int n_b = 801;

    double integrate(HaarSide side, const AffineFn& f) const;
    // Throws when f has support within two cells of the window edge.
    void check_support(const AffineFn& f) const;
};

struct InvarianceReport {
    double translation_residual;  // |I[f(g0 .)] - I[f]| / |I[f]|   (left side)
                                  // |I[f(. g0)] - I[f]| / |I[f]|   (right side)
    double quasi_invariance_residual;  // left measure vs 1/Delta(g0) under
                                       // right translation
};

InvarianceReport haar_invariance_check(HaarSide side, const AffineElement& g0,
                                       const AffineFn& f,
                                       const AffineQuadrature& quad = {});

enum class DeltaIdentity { inversion, conjugation, translation, trikernel };

struct DeltaReport {
    double width;
    double value;     // the mollified integral
    double expected;  // the delta-function limit
    double residual;  // |value - expected| / |expected|
};

// Gaussian mollifier of the group delta in (log a, b) coordinates, width w,
// normalized against the left Haar measure on a local grid.
//   inversion:    int dL x delta_w(x^-1) f(x)        -> f(e)
//   conjugation:  int dL x delta_w(g x g^-1) f(x)    -> f(e) / Delta(g)
//   translation:  int dL x delta_w(x0^-1 x) f(x)     -> f(x0)
//   trikernel:    int dL y dL x delta_w((yx)^-1 z) g(y) f(x) -> (g*f)(z)
DeltaReport delta_identity_check(DeltaIdentity which, double width,
                                 const AffineElement& g0, const AffineFn& f,
                                 const AffineFn& g = nullptr,
                                 const AffineElement& z = affine_identity());

// Convolution (g*f)(z) = int dL y g(y) f(y^-1 z) by quadrature.
double affine_convolution_at(const AffineFn& g, const AffineFn& f,
                             const AffineElement& z,
                             const AffineQuadrature& quad = {});

// Unimodularity witnesses built on the Gelfand involution
// f^ankh(x) = conj(f(x^-1)) (real test functions here).
struct GelfandWitnessReport {
    // max_z |(g*f)^ankh(z) - (f^ankh * g^ankh)(z)| / scale; this identity
    // survives non-unimodularity (the inversion substitution converts the
    // left measure into the right one on both sides), so the value is pure
    // quadrature error.
    double convolution_residual;
    // max_x |(Z_f)^ankh[h](x) - Z_{f^ankh}[h](x)| / scale for the
    // left-convolution representation; its derivation needs dR = dL, and on
    // the affine group the two sides differ by the Delta weight, so this is
    // O(1) for a bump away from a = 1.
    double representation_residual;
    // | ||f^ankh||_1 / ||f||_1 - 1 |; nonzero unless Delta = 1 on supp f.
    double isometry_deviation;
};

GelfandWitnessReport gelfand_unimodularity_witness(const AffineQuadrature& quad = {});

}  // namespace qmi
