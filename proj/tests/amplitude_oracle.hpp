#pragma once

// Test-only independent oracle for the basic cascaded scenario with
// gamma30_S = gamma21_T = 0. Before the first jump the composite state has
// exactly three nonzero amplitudes,
//   a |0_S,1_T> + b |3_S,1_T> + c |1_S,3_T>,
// and every jump lands in a dark state (C3 -> |1_S,2_T>, C1/C2 -> |1_S,1_T>),
// so the channel probabilities are time integrals of the pre-jump fluxes:
//   P(C1) = int |sqrt(G31S) b + sqrt(G31T eta) c|^2 dt
//   P(C2) = int G31T (1-eta) |c|^2 dt
//   P(C3) = int G32T |c|^2 dt   (= rho_aa)
// Plain std::complex arithmetic; independent of the library's operator path.

#include <cmath>
#include <complex>

#include "cascade/model.hpp"

namespace testing_oracle {

struct Channels {
    double p_c1 = 0.0;
    double p_c2 = 0.0;
    double p_c3 = 0.0; // absorption probability rho_aa
    double survival = 0.0;
};

inline Channels amplitude_oracle(const cascade::CascadeParams& p, double t_end,
                                 double dt = 2.5e-4) {
    using cd = std::complex<double>;
    const cd i1(0.0, 1.0);
    const double half_gs = 0.5 * (p.gamma31_S + p.gamma30_S);
    const double half_gt = 0.5 * (p.gamma31_T + p.gamma32_T);
    const double s_casc = std::sqrt(p.gamma31_S * p.gamma31_T * p.eta);
    const double w1s = std::sqrt(p.gamma31_S);
    const double w1t = std::sqrt(p.gamma31_T * p.eta);

    cd a = 1.0, b = 0.0, c = 0.0;
    auto deriv = [&](double t, cd ya, cd yb, cd yc, cd& da, cd& db, cd& dc) {
        const double om = cascade::omega_L(t, p.pulse);
        da = -i1 * om * yb;
        db = -i1 * om * ya - half_gs * yb;
        dc = -s_casc * yb - half_gt * yc;
    };

    Channels out;
    const long n = static_cast<long>(std::llround(t_end / dt));
    double t = 0.0;
    for (long step = 0; step < n; ++step) {
        const cd a0 = a, b0 = b, c0 = c;
        cd k1a, k1b, k1c, k2a, k2b, k2c, k3a, k3b, k3c, k4a, k4b, k4c;
        deriv(t, a0, b0, c0, k1a, k1b, k1c);
        deriv(t + 0.5 * dt, a0 + 0.5 * dt * k1a, b0 + 0.5 * dt * k1b, c0 + 0.5 * dt * k1c,
              k2a, k2b, k2c);
        deriv(t + 0.5 * dt, a0 + 0.5 * dt * k2a, b0 + 0.5 * dt * k2b, c0 + 0.5 * dt * k2c,
              k3a, k3b, k3c);
        deriv(t + dt, a0 + dt * k3a, b0 + dt * k3b, c0 + dt * k3c, k4a, k4b, k4c);
        a = a0 + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        b = b0 + dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        c = c0 + dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        t += dt;

        const double f1_0 = std::norm(w1s * b0 + w1t * c0);
        const double f1_1 = std::norm(w1s * b + w1t * c);
        out.p_c1 += 0.5 * (f1_0 + f1_1) * dt;
        const double fc_0 = std::norm(c0), fc_1 = std::norm(c);
        out.p_c2 += 0.5 * p.gamma31_T * (1.0 - p.eta) * (fc_0 + fc_1) * dt;
        out.p_c3 += 0.5 * p.gamma32_T * (fc_0 + fc_1) * dt;
    }
    out.survival = std::norm(a) + std::norm(b) + std::norm(c);
    return out;
}

} // namespace testing_oracle
