#pragma once

// Closed-form and quasi-steady optical-Bloch results for a three-level
// lambda target driven by weak coherent light, plus the matching
// time-domain scenario model.
//
// Conventions (pinned for test stability): drive Rabi amplitude
// Omega_c = i beta sqrt(eta Gamma31), H_drive = Omega_c s31 + conj(Omega_c) s13,
// output field <E_out> = beta - sqrt(eta Gamma31) <s13>. Any global phase
// works; this one reproduces the eta = 1 extinction condition exactly.

#include <cmath>
#include <complex>

#include "cascade/core.hpp"
#include "cascade/model.hpp"

namespace cascade {

struct ObeParams {
    double beta = 0.01; // incident dipole-mode field amplitude
    double gamma31 = 1.0;
    double gamma32 = 1.0;
    double eta = 1.0;

    void validate() const {
        if (!(gamma31 >= 0.0) || !(gamma32 >= 0.0))
            throw config_error("obe rates must be >= 0");
        if (!(eta >= 0.0 && eta <= 1.0)) throw config_error("eta must be in [0, 1]");
        if (!std::isfinite(beta)) throw config_error("beta must be finite");
        if (gamma31 + gamma32 <= 0.0)
            throw config_error("undefined steady state: gamma31 + gamma32 must be > 0");
    }
};

/// Omega_c = i beta sqrt(eta gamma31).
inline Amplitude drive_rabi(const ObeParams& p) {
    return detail::kI * p.beta * std::sqrt(p.eta * p.gamma31);
}

/// Mean output field beta (1 - 2 eta Gamma31 / (Gamma31 + Gamma32)).
/// The eta = 1 case is the closed-form extinction result; eta < 1 follows
/// the same dipole/non-dipole intensity split.
inline Amplitude mean_output_field(const ObeParams& p) {
    p.validate();
    return p.beta * (1.0 - 2.0 * p.eta * p.gamma31 / (p.gamma31 + p.gamma32));
}

/// Weak-drive quasi-steady coherence <s13> = -2i Omega_c / (Gamma31 + Gamma32).
inline Amplitude quasi_steady_coherence(const ObeParams& p) {
    p.validate();
    return -2.0 * detail::kI * drive_rabi(p) / (p.gamma31 + p.gamma32);
}

/// <E_out> given a coherence value: beta - sqrt(eta Gamma31) <s13>.
/// With quasi_steady_coherence this reproduces mean_output_field exactly.
inline Amplitude output_field_from_coherence(const ObeParams& p, Amplitude sigma13) {
    return p.beta - std::sqrt(p.eta * p.gamma31) * sigma13;
}

/// Coherent (mean-field) part of the output photon flux.
inline double coherent_flux(const ObeParams& p, Amplitude sigma13) {
    return std::norm(output_field_from_coherence(p, sigma13));
}

/// Target-only scenario driven by CW coherent light in the dipole mode.
/// Collapse operators stay undisplaced (the drive Hamiltonian is the
/// displaced-picture equivalent); the lab-frame output flux is the
/// expectation of F = C_out^dag C_out with C_out = beta I - sqrt(eta G31) s13,
/// recorded as "output_flux". The coherence s13 is recorded for the
/// mean-field flux. No steady state is expected (the drive never ends).
inline ScenarioModel build_coherent_drive_model(const ObeParams& p) {
    p.validate();
    ScenarioModel m;
    m.space = CompositeSpace{{Subsystem{"T", {"1", "2", "3"}}}};
    const auto& sp = m.space;

    const Amplitude oc = drive_rabi(p);
    Matrix h = oc * sigma(sp, "T", "3", "1").mat + std::conj(oc) * sigma(sp, "T", "1", "3").mat;
    m.h_static_herm = make_operator(sp, std::move(h));
    m.h_drive = zero_operator(sp);
    m.h_cascade_herm = zero_operator(sp);
    m.drive_envelope = [](double) { return 0.0; };

    m.collapse_ops.emplace_back(
        "C1", scale(sigma(sp, "T", "1", "3"), std::sqrt(p.gamma31 * p.eta)));
    m.collapse_ops.emplace_back(
        "C2", scale(sigma(sp, "T", "1", "3"), std::sqrt(p.gamma31 * (1.0 - p.eta))));
    m.collapse_ops.emplace_back("C3", scale(sigma(sp, "T", "2", "3"), std::sqrt(p.gamma32)));

    m.initial_state = basis_state(sp, {"1"});
    m.projectors["ground"] = sigma(sp, "T", "1", "1");
    m.projectors["pumped"] = sigma(sp, "T", "2", "2");
    m.projectors["excited"] = sigma(sp, "T", "3", "3");

    Matrix c_out = p.beta * Matrix::Identity(sp.dim(), sp.dim()) -
                   std::sqrt(p.eta * p.gamma31) * sigma(sp, "T", "1", "3").mat;
    m.flux_ops["output_flux"] = make_operator(sp, Matrix(c_out.adjoint() * c_out));
    m.linear_obs["sigma13"] = sigma(sp, "T", "1", "3");
    m.expects_steady_state = false;
    return m;
}

} // namespace cascade
