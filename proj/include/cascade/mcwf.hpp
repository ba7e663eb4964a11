#pragma once

// Monte Carlo wavefunction unraveling: RK4 integration of the unnormalized
// state under -i H_eff(t), waiting-time (norm-threshold) jump detection with
// bisection of the jump instant, inverse-CDF channel selection, and a
// deterministic ensemble reduction that is independent of worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/model.hpp"
#include "cascade/rng.hpp"
#include "cascade/sparse_op.hpp"

namespace cascade {

struct IntegratorConfig {
    double dt = 1e-3;            // base RK4 step, units of 1/Gamma31_T
    double t_end = 100.0;        // integration horizon
    double jump_time_tol = 1e-6; // bisection tolerance for the jump instant
    double ss_tol = 1e-8;        // steady-state excited-population threshold

    void validate() const {
        if (!(dt > 0.0)) throw config_error("integrator.dt must be > 0");
        if (!(t_end > 0.0)) throw config_error("integrator.t_end must be > 0");
        if (!(jump_time_tol > 0.0)) throw config_error("integrator.jump_time_tol must be > 0");
        if (!(ss_tol > 0.0)) throw config_error("integrator.ss_tol must be > 0");
    }

    bool operator==(const IntegratorConfig&) const = default;
};

struct JumpEvent {
    double time;
    std::string channel;
};

struct TrajectoryRecord {
    std::vector<JumpEvent> jumps;
    StateVector final_state; // normalized
    std::uint64_t seed = 0;
    bool steady_state_ok = true; // <excited> < ss_tol at t_end
};

struct EnsembleResult {
    int n_traj = 0;
    std::map<std::string, std::pair<double, double>> observables; // name -> (mean, stderr)
    std::map<std::string, long> channel_counts;
    int horizon_warnings = 0;
    std::optional<std::vector<TrajectoryRecord>> records;
};

namespace detail {

/// RK4 propagator for dpsi/dt = -i (H_static_nh + env(t) H_drive) psi.
/// H_static_nh = h_static_herm + h_cascade_herm - (i/2) sum C^dag C.
/// The -i prefactors are premultiplied into the stored operators; the real
/// envelope is evaluated once per distinct substage time.
class NonHermitianPropagator {
public:
    explicit NonHermitianPropagator(const ScenarioModel& model)
        : env_(model.drive_envelope) {
        Matrix damp = Matrix::Zero(model.space.dim(), model.space.dim());
        for (const auto& [label, c] : model.collapse_ops)
            damp += c.mat.adjoint() * c.mat;
        Matrix h_static = model.h_static_herm.mat + model.h_cascade_herm.mat -
                          kI * 0.5 * damp;
        static_mi_ = SparseOp::from_dense(h_static).premultiplied(-kI);
        drive_mi_ = SparseOp::from_dense(model.h_drive.mat).premultiplied(-kI);
        const int n = model.space.dim();
        k1_.resize(n); k2_.resize(n); k3_.resize(n); k4_.resize(n); tmp_.resize(n);
    }

    /// One RK4 step of size h starting at time t, in place.
    void step(Vector& psi, double t, double h) {
        const double e0 = env_(t);
        const double em = env_(t + 0.5 * h);
        const double e1 = env_(t + h);
        deriv(psi, e0, k1_);
        tmp_ = psi + (0.5 * h) * k1_;
        deriv(tmp_, em, k2_);
        tmp_ = psi + (0.5 * h) * k2_;
        deriv(tmp_, em, k3_);
        tmp_ = psi + h * k3_;
        deriv(tmp_, e1, k4_);
        psi += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

    void deriv(const Vector& psi, double envelope, Vector& out) const {
        out.setZero();
        static_mi_.apply(psi, out);
        if (envelope != 0.0) drive_mi_.apply_scaled(psi, out, envelope);
    }

private:
    SparseOp static_mi_;
    SparseOp drive_mi_;
    std::function<double(double)> env_;
    Vector k1_, k2_, k3_, k4_, tmp_;
};

} // namespace detail

/// Channel k chosen with probability <psi|Ck^dag Ck|psi> / sum_j of the same,
/// by inverse CDF on r2 in [0,1).
inline int select_jump_channel(const StateVector& psi,
                               const std::vector<std::pair<std::string, Operator>>& collapse_ops,
                               double r2) {
    std::vector<double> weights(collapse_ops.size());
    double total = 0.0;
    for (std::size_t k = 0; k < collapse_ops.size(); ++k) {
        weights[k] = (collapse_ops[k].second.mat * psi.amp).squaredNorm();
        total += weights[k];
    }
    if (total <= 0.0)
        throw engine_logic_error("jump triggered with zero total decay weight");
    const double target = r2 * total;
    double cum = 0.0;
    for (std::size_t k = 0; k < collapse_ops.size(); ++k) {
        cum += weights[k];
        if (target < cum) return static_cast<int>(k);
    }
    return static_cast<int>(collapse_ops.size()) - 1; // r2 ~ 1 edge
}

/// Single quantum trajectory. The unnormalized state evolves under H_eff;
/// when its squared norm crosses the waiting-time threshold r, the jump
/// instant is bisected to cfg.jump_time_tol, a channel is sampled, the
/// collapse operator applied, and integration restarts from the jump time.
inline TrajectoryRecord evolve_trajectory(const ScenarioModel& model,
                                          const IntegratorConfig& cfg,
                                          std::uint64_t seed) {
    cfg.validate();
    detail::NonHermitianPropagator prop(model);
    Xoshiro256 rng(seed);

    TrajectoryRecord rec;
    rec.seed = seed;
    Vector psi = model.initial_state.amp;
    Vector psi_prev(psi.size());
    double t = 0.0;
    double r = rng.uniform();

    auto check_finite = [&](const Vector& v) {
        if (!v.allFinite())
            throw numeric_error("non-finite amplitude during trajectory evolution");
    };

    while (t < cfg.t_end) {
        const double h = std::min(cfg.dt, cfg.t_end - t);
        psi_prev = psi;
        prop.step(psi, t, h);
        check_finite(psi);
        double n2 = psi.squaredNorm();

        if (n2 > r) {
            t += h;
            if (n2 < 1e-15)
                throw numeric_error("norm underflow without jump trigger; decrease dt");
            continue;
        }

        // Jump inside (t, t+h]: bisect the crossing time.
        double t_lo = t, t_hi = t + h;
        Vector psi_lo = psi_prev;
        while (t_hi - t_lo > cfg.jump_time_tol) {
            const double t_mid = 0.5 * (t_lo + t_hi);
            Vector psi_mid = psi_lo;
            prop.step(psi_mid, t_lo, t_mid - t_lo);
            if (psi_mid.squaredNorm() > r) {
                t_lo = t_mid;
                psi_lo = std::move(psi_mid);
            } else {
                t_hi = t_mid;
            }
        }
        Vector psi_jump = psi_lo;
        prop.step(psi_jump, t_lo, t_hi - t_lo);
        check_finite(psi_jump);

        const int channel =
            select_jump_channel({model.space, psi_jump}, model.collapse_ops, rng.uniform());
        psi = model.collapse_ops[channel].second.mat * psi_jump;
        const double jn = psi.norm();
        if (jn < 1e-15)
            throw engine_logic_error("collapse annihilated the state");
        psi /= jn;

        t = t_hi;
        rec.jumps.push_back({t, model.collapse_ops[channel].first});
        r = rng.uniform();
    }

    const double n = psi.norm();
    if (n < 1e-15) throw numeric_error("final state norm underflow");
    rec.final_state = StateVector{model.space, psi / n};

    if (model.expects_steady_state) {
        auto it = model.projectors.find("excited");
        if (it != model.projectors.end()) {
            const double exc = std::real(expectation(rec.final_state, it->second));
            rec.steady_state_ok = exc < cfg.ss_tol;
        }
    }
    return rec;
}

/// Trajectory ensemble. Per-trajectory seeds come from derive_seed(master_seed, i)
/// and the reduction runs in index order, so the result is bit-identical for a
/// fixed (master_seed, n_traj, cfg) regardless of thread count.
inline EnsembleResult run_ensemble(const ScenarioModel& model, const IntegratorConfig& cfg,
                                   int n_traj, std::uint64_t master_seed,
                                   int n_threads = 0, bool keep_records = false) {
    if (n_traj < 1) throw config_error("n_traj must be >= 1");
    cfg.validate();

    std::vector<TrajectoryRecord> records(n_traj);
    std::vector<std::string> traj_errors(n_traj);

    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            try {
                records[i] = evolve_trajectory(model, cfg, derive_seed(master_seed, i));
            } catch (const std::exception& e) {
                traj_errors[i] = e.what();
            }
        }
    };

    int threads = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, n_traj);
    if (threads == 1) {
        worker(0, n_traj);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n_traj + threads - 1) / threads;
        for (int k = 0; k < threads; ++k) {
            const int begin = k * chunk;
            const int end = std::min(n_traj, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < n_traj; ++i)
        if (!traj_errors[i].empty())
            throw numeric_error("trajectory " + std::to_string(i) + ": " + traj_errors[i]);

    EnsembleResult res;
    res.n_traj = n_traj;
    for (const auto& [name, proj] : model.projectors) {
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n_traj; ++i) {
            const double x = std::real(expectation(records[i].final_state, proj));
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n_traj;
        double stderr_ = 0.0;
        if (n_traj > 1) {
            const double var = std::max(0.0, (sum2 - n_traj * mean * mean) / (n_traj - 1));
            stderr_ = std::sqrt(var / n_traj);
        }
        res.observables[name] = {mean, stderr_};
    }
    for (const auto& [label, op] : model.collapse_ops) res.channel_counts[label] = 0;
    for (const auto& rec : records) {
        for (const auto& j : rec.jumps) ++res.channel_counts[j.channel];
        if (!rec.steady_state_ok) ++res.horizon_warnings;
    }
    if (keep_records) res.records = std::move(records);
    return res;
}

/// (mean, stderr) of the "absorbed" observable.
inline std::pair<double, double> absorption_probability(const EnsembleResult& result) {
    auto it = result.observables.find("absorbed");
    if (it == result.observables.end())
        throw config_error("ensemble has no 'absorbed' observable");
    return it->second;
}

} // namespace cascade
