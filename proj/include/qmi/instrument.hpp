#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qmi/operator_core.hpp"
#include "qmi/superop.hpp"

namespace qmi {

enum class InstrumentKind { discrete, quadrature };

struct InstrumentAtom {
    double weight;  // >= 0
    Mat kraus;
};

// Weighted family of Kraus operators. The measure lives on the weight; the
// Kraus matrices stay finite so they can be reused across weights.
struct Instrument {
    int dim = 0;
    InstrumentKind kind = InstrumentKind::discrete;
    std::vector<InstrumentAtom> atoms;
    std::string warning;  // set when built outside the weak regime
};

inline constexpr std::size_t kAtomCap = 1000000;
inline constexpr double kWeakRegimeMax = 0.1;  // kappa*dt above this is flagged

Instrument identity_instrument(int dim);

// Two atoms: (1, e^{-1/2 L^dag L kappa dt}) and (kappa dt, L).
Instrument jump_weak(const Mat& l, double kappa, double dt);

// Gauss-Hermite atoms dW_i with Kraus e^{-1/2 (L^dag L + L^2) kappa dt
// + L sqrt(kappa) dW_i}. If defect_tol > 0, throws when the achieved
// completeness defect exceeds it (message carries the value).
Instrument diffusive_weak(const Mat& l, double kappa, double dt, int n_nodes = 21,
                          double defect_tol = -1.0);

// Tensor-grid simultaneous diffusive instrument; at most 3 Lindblads.
Instrument dmncos_weak(const std::vector<Mat>& ls, double kappa, double dt,
                       int n_nodes = 21);

// Pairwise products with the later instrument's Kraus on the left.
Instrument convolve(const Instrument& later, const Instrument& earlier);

// n-fold self-convolution; repeat(i, 0) is the identity instrument.
Instrument repeat(const Instrument& inst, int n);

SuperOp total_operation(const Instrument& inst);

// || sum_i w_i K_i^dag K_i - 1 ||_F
double completeness_defect(const Instrument& inst);

// w_i tr(rho K_i^dag K_i) / tr(rho); rho must be PSD with positive trace.
double born_probability(const Mat& rho, const Instrument& inst, std::size_t atom_index);

std::string instrument_to_json(const Instrument& inst);
Instrument instrument_from_json(const std::string& text);

}  // namespace qmi
