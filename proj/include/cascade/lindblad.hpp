#pragma once

// Deterministic master-equation integration, the ground-truth oracle for the
// trajectory average, plus photodetection-flux time series.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cascade/core.hpp"
#include "cascade/mcwf.hpp"
#include "cascade/model.hpp"
#include "cascade/sparse_op.hpp"

namespace cascade {

struct DensityMatrix {
    CompositeSpace space;
    Matrix rho;
};

/// drho/dt = -i[H_herm(t), rho] + sum_k (Ck rho Ck^dag - 1/2 {Ck^dag Ck, rho}).
/// Reference implementation; integrate_master uses an equivalent sparse path.
inline DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t,
                                  const ScenarioModel& model) {
    if (!(rho.space == model.space)) throw dimension_error("density matrix space mismatch");
    const Matrix h = model_h_herm(model, t).mat;
    Matrix out = -detail::kI * (h * rho.rho - rho.rho * h);
    for (const auto& [label, c] : model.collapse_ops) {
        const Matrix cdc = c.mat.adjoint() * c.mat;
        out += c.mat * rho.rho * c.mat.adjoint() -
               0.5 * (cdc * rho.rho + rho.rho * cdc);
    }
    return {rho.space, std::move(out)};
}

struct MasterTrace {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> observables; // projectors + flux ops
    std::map<std::string, std::vector<Amplitude>> linear;   // complex Tr(A rho)
    DensityMatrix rho_final;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 0.0; // over recorded samples
    bool steady_state_ok = true;
};

namespace detail {

class MasterPropagator {
public:
    explicit MasterPropagator(const ScenarioModel& model) : env_(model.drive_envelope) {
        const int n = model.space.dim();
        Matrix damp = Matrix::Zero(n, n);
        for (const auto& [label, c] : model.collapse_ops)
            damp += c.mat.adjoint() * c.mat;
        // Non-Hermitian drift: rhs = -i(H_nh rho - rho H_nh^dag) + sum C rho C^dag
        Matrix h_nh = model.h_static_herm.mat + model.h_cascade_herm.mat - kI * 0.5 * damp;
        drift_mi_ = SparseOp::from_dense(h_nh).premultiplied(-kI);
        drift_dag_pi_ = SparseOp::from_dense(Matrix(h_nh.adjoint())).premultiplied(kI);
        drive_mi_ = SparseOp::from_dense(model.h_drive.mat).premultiplied(-kI);
        for (const auto& [label, c] : model.collapse_ops)
            jumps_.push_back(SparseOp::from_dense(c.mat));
        k1_.resize(n, n); k2_.resize(n, n); k3_.resize(n, n); k4_.resize(n, n);
        tmp_.resize(n, n);
    }

    void deriv(const Matrix& rho, double envelope, Matrix& out) const {
        out.setZero();
        drift_mi_.apply_left_scaled(rho, out, 1.0);
        drift_dag_pi_.apply_right_scaled(rho, out, 1.0);
        if (envelope != 0.0) {
            drive_mi_.apply_left_scaled(rho, out, envelope);
            // +i e rho D = -e * rho * (-i D)
            drive_mi_.apply_right_scaled(rho, out, -envelope);
        }
        for (const auto& c : jumps_) c.apply_sandwich(rho, out);
    }

    /// One RK4 step followed by rehermitization rho <- (rho + rho^dag)/2.
    void step(Matrix& rho, double t, double h) {
        const double e0 = env_(t);
        const double em = env_(t + 0.5 * h);
        const double e1 = env_(t + h);
        deriv(rho, e0, k1_);
        tmp_ = rho + (0.5 * h) * k1_;
        deriv(tmp_, em, k2_);
        tmp_ = rho + (0.5 * h) * k2_;
        deriv(tmp_, em, k3_);
        tmp_ = rho + h * k3_;
        deriv(tmp_, e1, k4_);
        rho += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        tmp_ = rho.adjoint();
        rho = 0.5 * (rho + tmp_);
    }

private:
    SparseOp drift_mi_, drift_dag_pi_, drive_mi_;
    std::vector<SparseOp> jumps_;
    std::function<double(double)> env_;
    Matrix k1_, k2_, k3_, k4_, tmp_;
};

} // namespace detail

/// Integrate the master equation from the model's initial state, recording
/// every projector, flux and linear observable roughly every `sample_dt`.
/// Throws numeric_error if |Tr rho - 1| drifts beyond 1e-6.
inline MasterTrace integrate_master(const ScenarioModel& model, const IntegratorConfig& cfg,
                                    double sample_dt = 0.1) {
    cfg.validate();
    detail::MasterPropagator prop(model);

    Matrix rho = model.initial_state.amp * model.initial_state.amp.adjoint();
    MasterTrace trace;
    trace.min_eigenvalue = 0.0;

    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    const long stride = std::max(1L, static_cast<long>(std::llround(sample_dt / cfg.dt)));

    Eigen::SelfAdjointEigenSolver<Matrix> eig;
    auto record = [&](double t, const Matrix& r) {
        trace.times.push_back(t);
        for (const auto& [name, p] : model.projectors)
            trace.observables[name].push_back(std::real((p.mat * r).trace()));
        for (const auto& [name, f] : model.flux_ops)
            trace.observables[name].push_back(std::real((f.mat * r).trace()));
        for (const auto& [name, a] : model.linear_obs)
            trace.linear[name].push_back((a.mat * r).trace());
        eig.compute(r, Eigen::EigenvaluesOnly);
        trace.min_eigenvalue = std::min(trace.min_eigenvalue, eig.eigenvalues().minCoeff());
    };

    record(0.0, rho);
    double t = 0.0;
    for (long i = 0; i < n_steps; ++i) {
        const double h = std::min(cfg.dt, cfg.t_end - t);
        prop.step(rho, t, h);
        t += h;
        const double drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        trace.max_trace_drift = std::max(trace.max_trace_drift, drift);
        if (drift > 1e-6)
            throw numeric_error("master-equation trace drift exceeded 1e-6");
        if (!rho.allFinite())
            throw numeric_error("non-finite density matrix during integration");
        if ((i + 1) % stride == 0 || i == n_steps - 1) record(t, rho);
    }

    trace.rho_final = {model.space, rho};
    if (model.expects_steady_state) {
        auto it = model.projectors.find("excited");
        if (it != model.projectors.end())
            trace.steady_state_ok =
                std::real((it->second.mat * rho).trace()) < cfg.ss_tol;
    }
    return trace;
}

/// Tr(C1^dag C1 rho)(t) recorded by integrate_master under "c1_flux".
inline const std::vector<double>& c1_flux(const MasterTrace& trace) {
    auto it = trace.observables.find("c1_flux");
    if (it == trace.observables.end())
        throw config_error("trace has no 'c1_flux' observable");
    return it->second;
}

/// Final value of a recorded observable.
inline double final_value(const MasterTrace& trace, const std::string& name) {
    auto it = trace.observables.find(name);
    if (it == trace.observables.end() || it->second.empty())
        throw config_error("trace has no observable '" + name + "'");
    return it->second.back();
}

} // namespace cascade
