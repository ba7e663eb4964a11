#pragma once

// Physical model construction for the cascaded source->target system:
// Gaussian drive pulse, collapse operators, the non-Hermitian effective
// Hamiltonian, its Hermitian/Lindblad split, and the built-in scenarios.
//
// Units: hbar = 1 and Gamma31_T = 1 defines the time unit; every rate in
// CascadeParams is a dimensionless multiple of Gamma31_T.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cascade/core.hpp"

namespace cascade {

struct PulseShape {
    double omega0 = 1.0; // peak Rabi frequency
    double tau = 10.0;   // pulse width
    double t0 = 20.0;    // pulse center

    bool operator==(const PulseShape&) const = default;
};

/// Omega_L(t) = Omega0 * exp(-(t-t0)^2 / tau^2)
inline double omega_L(double t, const PulseShape& p) {
    const double u = (t - p.t0) / p.tau;
    return p.omega0 * std::exp(-u * u);
}

struct CascadeParams {
    double gamma31_S = 10.0; // source 3->1 emission into the channel
    double gamma30_S = 0.0;  // source 3->0 scattering (emission-time jitter)
    double gamma31_T = 1.0;  // target 3->1 (sets the unit)
    double gamma32_T = 1.0;  // target 3->2 (absorption-completing decay)
    double gamma21_T = 0.0;  // target ground-state pure dephasing
    double eta = 1.0;        // dipole-mode overlap of the incident field
    double eta_S = 1.0;      // source collection efficiency (classical bookkeeping)
    PulseShape pulse;

    void validate() const {
        auto nonneg = [](double v, const char* name) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw config_error(std::string(name) + " must be finite and >= 0");
        };
        nonneg(gamma31_S, "gamma31_S");
        nonneg(gamma30_S, "gamma30_S");
        nonneg(gamma31_T, "gamma31_T");
        nonneg(gamma32_T, "gamma32_T");
        nonneg(gamma21_T, "gamma21_T");
        if (!(eta >= 0.0 && eta <= 1.0)) throw config_error("eta must be in [0, 1]");
        if (!(eta_S >= 0.0 && eta_S <= 1.0)) throw config_error("eta_S must be in [0, 1]");
        if (!(pulse.tau > 0.0)) throw config_error("pulse.tau must be > 0");
        if (!(pulse.omega0 >= 0.0)) throw config_error("pulse.omega0 must be >= 0");
    }

    bool operator==(const CascadeParams&) const = default;
};

/// Assembled simulation problem. H_herm(t) = h_static_herm +
/// drive_envelope(t) * h_drive + h_cascade_herm; the engines subtract
/// (i/2) sum_k C_k^dag C_k to obtain H_eff.
struct ScenarioModel {
    CompositeSpace space;
    Operator h_static_herm;
    Operator h_drive;
    Operator h_cascade_herm;
    std::function<double(double)> drive_envelope;
    std::vector<std::pair<std::string, Operator>> collapse_ops;
    StateVector initial_state;
    std::map<std::string, Operator> projectors;
    std::map<std::string, Operator> flux_ops;   // photodetection rates, Tr(F rho)
    std::map<std::string, Operator> linear_obs; // complex observables, Tr(A rho)
    bool expects_steady_state = true;
};

inline CompositeSpace basic_space() {
    return CompositeSpace{{Subsystem{"S", {"0", "1", "3"}},
                           Subsystem{"T", {"1", "2", "3"}}}};
}

inline CompositeSpace entanglement_space() {
    return CompositeSpace{{Subsystem{"S", {"0", "3", "1+", "1-"}},
                           Subsystem{"T", {"1", "3+", "3-", "2+", "2-"}}}};
}

/// Collapse operators for the basic cascaded scenario:
///   C1 = sqrt(G31_S) s13_S + sqrt(G31_T eta) s13_T   (shared channel mode)
///   C2 = sqrt(G31_T (1-eta)) s13_T                   (non-dipole modes)
///   C3 = sqrt(G32_T) s23_T                           (absorption-completing)
///   C4 = sqrt(G30_S) s03_S        iff gamma30_S > 0  (jitter scattering)
///   C5 = sqrt(g21/2)(s22_T-s11_T) iff gamma21_T > 0  (ground dephasing)
inline std::vector<std::pair<std::string, Operator>>
build_collapse_ops(const CascadeParams& p, const CompositeSpace& space) {
    std::vector<std::pair<std::string, Operator>> ops;
    Operator c1 = add(scale(sigma(space, "S", "1", "3"), std::sqrt(p.gamma31_S)),
                      scale(sigma(space, "T", "1", "3"), std::sqrt(p.gamma31_T * p.eta)));
    ops.emplace_back("C1", std::move(c1));
    ops.emplace_back("C2", scale(sigma(space, "T", "1", "3"),
                                 std::sqrt(p.gamma31_T * (1.0 - p.eta))));
    ops.emplace_back("C3", scale(sigma(space, "T", "2", "3"), std::sqrt(p.gamma32_T)));
    if (p.gamma30_S > 0.0)
        ops.emplace_back("C4", scale(sigma(space, "S", "0", "3"), std::sqrt(p.gamma30_S)));
    if (p.gamma21_T > 0.0) {
        Operator c5 = add(sigma(space, "T", "2", "2"),
                          scale(sigma(space, "T", "1", "1"), -1.0));
        ops.emplace_back("C5", scale(c5, std::sqrt(p.gamma21_T / 2.0)));
    }
    return ops;
}

/// Non-Hermitian effective Hamiltonian of the basic scenario at time t
/// (resonant drive frame). The gamma30_S broadening and the gamma21_T
/// dephasing contribution extend the gamma30_S = 0 form.
inline Operator build_h_eff(const CascadeParams& p, const CompositeSpace& space, double t) {
    using detail::kI;
    const double om = omega_L(t, p.pulse);
    Operator h = scale(add(sigma(space, "S", "0", "3"), sigma(space, "S", "3", "0")), om);
    h = add(h, scale(sigma(space, "S", "3", "3"),
                     -kI * 0.5 * (p.gamma31_S + p.gamma30_S)));
    h = add(h, scale(sigma(space, "T", "3", "3"),
                     -kI * 0.5 * (p.gamma31_T + p.gamma32_T)));
    Operator cross = make_operator(
        space, Matrix(sigma(space, "S", "1", "3").mat * sigma(space, "T", "3", "1").mat));
    h = add(h, scale(cross, -kI * std::sqrt(p.gamma31_S * p.gamma31_T * p.eta)));
    if (p.gamma21_T > 0.0) {
        // -(i/2) C5^dag C5 = -(i/4) gamma21 (s11 + s22) on the target
        Operator diag = add(sigma(space, "T", "1", "1"), sigma(space, "T", "2", "2"));
        h = add(h, scale(diag, -kI * 0.25 * p.gamma21_T));
    }
    return h;
}

/// Hermitian part of the split H_eff = H_herm - (i/2) sum C^dag C:
/// the drive plus (i/2) sqrt(G31_S G31_T eta)(s31_S s13_T - s13_S s31_T).
inline Operator build_h_herm(const CascadeParams& p, const CompositeSpace& space, double t) {
    using detail::kI;
    const double om = omega_L(t, p.pulse);
    Operator h = scale(add(sigma(space, "S", "0", "3"), sigma(space, "S", "3", "0")), om);
    Matrix up = sigma(space, "S", "3", "1").mat * sigma(space, "T", "1", "3").mat;
    Matrix down = sigma(space, "S", "1", "3").mat * sigma(space, "T", "3", "1").mat;
    const double g = std::sqrt(p.gamma31_S * p.gamma31_T * p.eta);
    return add(h, make_operator(space, Matrix(kI * 0.5 * g * (up - down))));
}

/// H_herm(t) assembled from a model's parts.
inline Operator model_h_herm(const ScenarioModel& m, double t) {
    Operator h = add(m.h_static_herm, m.h_cascade_herm);
    return add(h, scale(m.h_drive, m.drive_envelope(t)));
}

/// H_eff(t) = H_herm(t) - (i/2) sum_k C_k^dag C_k.
inline Operator model_h_eff(const ScenarioModel& m, double t) {
    Operator h = model_h_herm(m, t);
    Matrix damp = Matrix::Zero(m.space.dim(), m.space.dim());
    for (const auto& [label, c] : m.collapse_ops) damp += c.mat.adjoint() * c.mat;
    return add(h, make_operator(m.space, Matrix(-detail::kI * 0.5 * damp)));
}

namespace detail {

/// Projector onto the subspace where at least one subsystem is excited;
/// complement of the product of per-subsystem ground projectors.
inline Operator excited_union_projector(const CompositeSpace& space,
                                        const std::vector<std::pair<std::string, std::vector<std::string>>>& excited_levels) {
    Matrix ground = Matrix::Identity(space.dim(), space.dim());
    for (const auto& [sub, levels] : excited_levels) {
        Matrix p_exc = Matrix::Zero(space.dim(), space.dim());
        for (const auto& lvl : levels) p_exc += sigma(space, sub, lvl, lvl).mat;
        ground = ground * (Matrix::Identity(space.dim(), space.dim()) - p_exc);
    }
    return make_operator(space, Matrix(Matrix::Identity(space.dim(), space.dim()) - ground));
}

inline Operator ket_bra(const CompositeSpace& space, const StateVector& a,
                        const StateVector& b) {
    return make_operator(space, Matrix(a.amp * b.amp.adjoint()));
}

} // namespace detail

/// Basic scenario: 9-dim source (x) target space, initial |0_S, 1_T>,
/// projectors "absorbed" |1_S,2_T>, "failed" |1_S,1_T>, "excited" (union),
/// flux observable "c1_flux" = C1^dag C1.
inline ScenarioModel build_basic_model(const CascadeParams& p) {
    p.validate();
    ScenarioModel m;
    m.space = basic_space();
    m.h_static_herm = zero_operator(m.space);
    m.h_drive = add(sigma(m.space, "S", "0", "3"), sigma(m.space, "S", "3", "0"));
    Matrix up = sigma(m.space, "S", "3", "1").mat * sigma(m.space, "T", "1", "3").mat;
    Matrix down = sigma(m.space, "S", "1", "3").mat * sigma(m.space, "T", "3", "1").mat;
    const double g = std::sqrt(p.gamma31_S * p.gamma31_T * p.eta);
    m.h_cascade_herm = make_operator(m.space, Matrix(detail::kI * 0.5 * g * (up - down)));
    m.drive_envelope = [pulse = p.pulse](double t) { return omega_L(t, pulse); };
    m.collapse_ops = build_collapse_ops(p, m.space);
    m.initial_state = basis_state(m.space, {"0", "1"});

    auto ket = [&](const char* s, const char* t) { return basis_state(m.space, {s, t}); };
    m.projectors["absorbed"] = detail::ket_bra(m.space, ket("1", "2"), ket("1", "2"));
    m.projectors["failed"] = detail::ket_bra(m.space, ket("1", "1"), ket("1", "1"));
    m.projectors["excited"] =
        detail::excited_union_projector(m.space, {{"S", {"3"}}, {"T", {"3"}}});

    const Matrix& c1 = m.collapse_ops[0].second.mat;
    m.flux_ops["c1_flux"] = make_operator(m.space, Matrix(c1.adjoint() * c1));
    return m;
}

/// Polarization-entanglement scenario: source {0, 3, 1+, 1-}, target
/// {1, 3+, 3-, 2+, 2-}, 20-dim. The source Raman-scatters into |1+/-> with
/// rate G31_S/2 per branch; each branch drives the matching target
/// polarization. The 3+/- -> 2+/- photons are indistinguishable, so their
/// detection is one coherent channel C3 (this is what preserves the Bell
/// coherence of the conditional state).
inline ScenarioModel build_entanglement_model(const CascadeParams& p) {
    p.validate();
    ScenarioModel m;
    m.space = entanglement_space();
    const auto& sp = m.space;
    m.h_static_herm = zero_operator(sp);
    m.h_drive = add(sigma(sp, "S", "0", "3"), sigma(sp, "S", "3", "0"));
    m.drive_envelope = [pulse = p.pulse](double t) { return omega_L(t, pulse); };

    const double g_branch = std::sqrt((p.gamma31_S / 2.0) * p.gamma31_T * p.eta);
    Matrix casc = Matrix::Zero(sp.dim(), sp.dim());
    for (const char* pol : {"+", "-"}) {
        const std::string s1 = std::string("1") + pol; // source 1+/-
        const std::string t3 = std::string("3") + pol; // target 3+/-
        Matrix up = sigma(sp, "S", "3", s1).mat * sigma(sp, "T", "1", t3).mat;
        Matrix down = sigma(sp, "S", s1, "3").mat * sigma(sp, "T", t3, "1").mat;
        casc += (detail::kI * 0.5 * g_branch * (up - down)).eval();
    }
    m.h_cascade_herm = make_operator(sp, std::move(casc));

    for (const char* pol : {"+", "-"}) {
        const std::string s1 = std::string("1") + pol;
        const std::string t3 = std::string("3") + pol;
        Operator c1 = add(scale(sigma(sp, "S", s1, "3"), std::sqrt(p.gamma31_S / 2.0)),
                          scale(sigma(sp, "T", "1", t3), std::sqrt(p.gamma31_T * p.eta)));
        m.collapse_ops.emplace_back(std::string("C1") + pol, std::move(c1));
        m.collapse_ops.emplace_back(std::string("C2") + pol,
                                    scale(sigma(sp, "T", "1", t3),
                                          std::sqrt(p.gamma31_T * (1.0 - p.eta))));
    }
    Operator c3 = add(sigma(sp, "T", "2+", "3+"), sigma(sp, "T", "2-", "3-"));
    m.collapse_ops.emplace_back("C3", scale(c3, std::sqrt(p.gamma32_T)));

    m.initial_state = basis_state(sp, {"0", "1"});

    auto ket = [&](const char* s, const char* t) { return basis_state(sp, {s, t}); };
    StateVector bell = scale(add(ket("1+", "2+"), ket("1-", "2-")), 1.0 / std::sqrt(2.0));
    m.projectors["bell"] = detail::ket_bra(sp, bell, bell);
    m.projectors["success"] = add(detail::ket_bra(sp, ket("1+", "2+"), ket("1+", "2+")),
                                  detail::ket_bra(sp, ket("1-", "2-"), ket("1-", "2-")));
    m.projectors["failed"] = add(detail::ket_bra(sp, ket("1+", "1"), ket("1+", "1")),
                                 detail::ket_bra(sp, ket("1-", "1"), ket("1-", "1")));
    m.projectors["excited"] =
        detail::excited_union_projector(sp, {{"S", {"3"}}, {"T", {"3+", "3-"}}});
    return m;
}

} // namespace cascade
