#include "qmi/trajectory.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qmi {

MeasurementRecord sample_record(RecordKind kind, int n_steps, int n_channels,
                                double dt, double kappa, Rng& rng) {
    if (n_steps < 0 || n_channels < 1)
        throw std::invalid_argument("sample_record: bad step/channel count");
    if (dt <= 0 || kappa <= 0)
        throw std::invalid_argument("sample_record: dt and kappa must be positive");
    if (kind == RecordKind::poisson && kappa * dt > 1.0)
        throw std::invalid_argument("sample_record: kappa*dt > 1 is not a probability");
    MeasurementRecord rec;
    rec.kind = kind;
    rec.n_steps = n_steps;
    rec.n_channels = n_channels;
    rec.dt = dt;
    rec.kappa = kappa;
    rec.increments.resize(static_cast<std::size_t>(n_steps) * n_channels);
    const double sdt = std::sqrt(dt);
    for (auto& v : rec.increments)
        v = (kind == RecordKind::wiener) ? sdt * rng.gaussian()
                                         : (rng.bernoulli(kappa * dt) ? 1.0 : 0.0);
    return rec;
}

TrajectoryResult kraus_of_record(const std::vector<Mat>& ls,
                                 const MeasurementRecord& record) {
    if (ls.empty()) throw std::invalid_argument("kraus_of_record: no Lindblad operators");
    const int d = static_cast<int>(ls.front().rows());
    if (record.kind == RecordKind::wiener &&
        record.n_channels != static_cast<int>(ls.size()))
        throw std::invalid_argument(
            "kraus_of_record: wiener record needs one channel per Lindblad");

    const double kdt = record.kappa * record.dt;
    const double sk = std::sqrt(record.kappa);
    Mat drift = Mat::Zero(d, d);
    for (const Mat& l : ls) {
        if (record.kind == RecordKind::wiener)
            drift -= 0.5 * kdt * (l.adjoint() * l + l * l);
        else
            drift -= 0.5 * kdt * (l.adjoint() * l);
    }
    const Mat no_fire = (record.kind == RecordKind::poisson) ? mat_exp(drift) : Mat();
    const double log_no_fire_corr =
        (record.kind == RecordKind::poisson) ? -std::log1p(-kdt) : 0.0;

    TrajectoryResult res;
    res.kraus = Mat::Identity(d, d);
    res.record = record;
    for (int t = 0; t < record.n_steps; ++t) {
        if (record.kind == RecordKind::wiener) {
            Mat gen = drift;
            for (std::size_t mu = 0; mu < ls.size(); ++mu)
                gen += sk * record.at(t, static_cast<int>(mu)) * ls[mu];
            res.kraus = mat_exp(gen) * res.kraus;
        } else {
            res.kraus = no_fire * res.kraus;
            // corrections accrue only for channels that were actually
            // sampled; Lindblads without a record channel contribute the
            // no-fire drift alone
            const int monitored =
                std::min(record.n_channels, static_cast<int>(ls.size()));
            for (int mu = 0; mu < monitored; ++mu) {
                if (record.at(t, mu) > 0.5)
                    res.kraus = ls[mu] * res.kraus;
                else
                    res.log_ostensible_weight += log_no_fire_corr;
            }
        }
        const double nrm = res.kraus.norm();
        if (nrm > 1e100 || (nrm > 0 && nrm < 1e-100)) {
            res.kraus /= nrm;
            res.log_ostensible_weight += 2.0 * std::log(nrm);
        }
    }
    return res;
}

namespace {

struct ChunkSum {
    Mat sum;        // sum of weighted instrument elements
    double sum_sq = 0.0;  // sum of squared Frobenius norms
    double sum_w = 0.0;   // sum of physical weights at rho = 1/d
};

}  // namespace

EnsembleResult ensemble_channel(const std::vector<Mat>& ls, RecordKind kind,
                                double kappa, double t_total, double dt, int n_traj,
                                const Rng& rng, int n_threads) {
    if (n_traj < 100)
        throw std::invalid_argument("ensemble_channel: need at least 100 trajectories");
    const int d = static_cast<int>(ls.front().rows());
    const int n_steps = static_cast<int>(std::llround(t_total / dt));
    const int n_channels = static_cast<int>(ls.size());

    // Fixed chunk size decouples the reduction order from the thread count.
    constexpr int kChunk = 64;
    const int n_chunks = (n_traj + kChunk - 1) / kChunk;
    std::vector<ChunkSum> chunks(n_chunks);
    std::atomic<int> next{0};

    auto worker = [&]() {
        for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
            ChunkSum acc;
            acc.sum = Mat::Zero(d * d, d * d);
            const int lo = c * kChunk;
            const int hi = std::min(n_traj, lo + kChunk);
            for (int i = lo; i < hi; ++i) {
                Rng stream = rng.split(static_cast<std::uint64_t>(i));
                const auto rec =
                    sample_record(kind, n_steps, n_channels, dt, kappa, stream);
                const auto traj = kraus_of_record(ls, rec);
                const double w = std::exp(traj.log_ostensible_weight);
                Mat elem = w * Eigen::kroneckerProduct(traj.kraus.conjugate(),
                                                       traj.kraus).eval();
                acc.sum += elem;
                acc.sum_sq += elem.squaredNorm();
                acc.sum_w += w * (traj.kraus.adjoint() * traj.kraus).trace().real() / d;
            }
            chunks[c] = std::move(acc);
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    Mat sum = Mat::Zero(d * d, d * d);
    double sum_sq = 0.0, sum_w = 0.0;
    for (const auto& c : chunks) {
        sum += c.sum;
        sum_sq += c.sum_sq;
        sum_w += c.sum_w;
    }
    const Mat mean = sum / n_traj;
    const double var_total =
        std::max(0.0, (sum_sq - n_traj * mean.squaredNorm()) / (n_traj - 1.0));
    EnsembleResult out{SuperOp(d, mean), std::sqrt(var_total / n_traj),
                       sum_w / n_traj};
    return out;
}

double physical_weight(const Mat& rho0, const TrajectoryResult& result) {
    return std::exp(result.log_ostensible_weight) *
           (rho0 * result.kraus.adjoint() * result.kraus).trace().real();
}

Mat evolve_lindblad(const Mat& rho0, const std::vector<Mat>& ls, double kappa,
                    double t_total) {
    return channel_exp(lindblad_dissipator(ls), kappa * t_total).apply(rho0);
}

}  // namespace qmi
