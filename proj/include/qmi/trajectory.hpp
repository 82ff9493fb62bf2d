#pragma once

#include <vector>

#include "qmi/operator_core.hpp"
#include "qmi/rng.hpp"
#include "qmi/superop.hpp"

namespace qmi {

enum class RecordKind { wiener, poisson };

// Time-ordered stochastic increments. Sampling is ostensible: Wiener
// increments N(0, dt), Poisson bits Bernoulli(kappa dt), independent of any
// state. Physical weights are attached afterwards.
struct MeasurementRecord {
    RecordKind kind = RecordKind::wiener;
    int n_steps = 0;
    int n_channels = 0;
    double dt = 0;
    double kappa = 0;
    std::vector<double> increments;  // step-major, [step * n_channels + ch]

    double at(int step, int ch) const { return increments[step * n_channels + ch]; }
};

struct TrajectoryResult {
    Mat kraus;
    // Log of the multiplicative factor this trajectory carries into ensemble
    // averages: the sampling-measure mismatch (Poisson no-fire correction)
    // plus 2*log of any overflow rescale applied to kraus. Zero for Wiener
    // records that never overflow.
    double log_ostensible_weight = 0.0;
    MeasurementRecord record;
};

MeasurementRecord sample_record(RecordKind kind, int n_steps, int n_channels,
                                double dt, double kappa, Rng& rng);

// Time-ordered product over the record, step factors applied on the left.
// Wiener step: exp(-1/2 sum(L^dag L + L^2) kappa dt + sum L sqrt(kappa) dW).
// Poisson step: exp(-1/2 sum L^dag L kappa dt), then L for each fired bit.
TrajectoryResult kraus_of_record(const std::vector<Mat>& ls,
                                 const MeasurementRecord& record);

struct EnsembleResult {
    SuperOp channel;
    double std_error;    // from per-trajectory spread, Frobenius aggregate
    double mean_weight;  // mean physical weight at rho = 1/d; 1 for TP evolution
};

// Monte Carlo mean of the trajectory instrument elements. Trajectory i uses
// the stream rng.split(i); partial sums are reduced in fixed chunk order, so
// results are bit-identical for any worker count.
EnsembleResult ensemble_channel(const std::vector<Mat>& ls, RecordKind kind,
                                double kappa, double t_total, double dt, int n_traj,
                                const Rng& rng, int n_threads = 1);

// e^{log_ostensible_weight} tr(rho0 K^dag K); ensemble mean is 1 for TP evolution.
double physical_weight(const Mat& rho0, const TrajectoryResult& result);

Mat evolve_lindblad(const Mat& rho0, const std::vector<Mat>& ls, double kappa,
                    double t_total);

}  // namespace qmi
