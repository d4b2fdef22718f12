#pragma once

namespace qkd {

/// Source, channel and detector parameters of the attenuated-laser setup.
struct OpticalSetup {
    double alpha_db_km = 0.25;  // fiber attenuation, dB/km
    double distance_km = 0.0;
    double visibility = 1.0;
    double eta = 0.1;       // detector efficiency
    double p_dark = 1e-5;   // dark-count probability per gate
    double mu = 0.1;        // mean photon number per pulse

    double transmission() const;  // t = 10^{-alpha d / 10}
    double fidelity() const { return 0.5 * (1.0 + visibility); }
    double disturbance() const { return 0.5 * (1.0 - visibility); }
};

/// Per-pulse click rates and the QBER they imply.
struct RateBundle {
    double c0 = 0.0;       // no click
    double c_acc_x = 0.0;  // accepted, x-basis (correct bits)
    double c_acc_z = 0.0;  // accepted, z-basis (wrong bits)
    double c_acc = 0.0;    // sifted-key rate, (c_acc_x + c_acc_z)/2
    double c2_x = 0.0;     // double clicks, x basis
    double c2_z = 0.0;     // double clicks, z basis
    double qber = 0.0;     // c_acc_z / (2 c_acc)
};

/// Probability of no click when n photons arrive: (1-p_d)^2 (1-eta)^n.
double p_zero_click(int n, const OpticalSetup& s);

/// Single click on the wrong z detector only, with channel visibility v.
double p_acc_z(int n, double v, const OpticalSetup& s);

/// Single click on the conclusive x detector only (basis-independent of v).
double p_acc_x(int n, const OpticalSetup& s);

/// Acceptance probability (p_acc_x + p_acc_z)/2 over the random basis choice.
double p_acc(int n, double v, const OpticalSetup& s);

double p2_z(int n, double v, const OpticalSetup& s);
double p2_x(int n, const OpticalSetup& s);

/// Poisson-averaged closed forms of all rates at the setup's mu.
RateBundle rates(const OpticalSetup& s);

/// I(A':B) = C_acc (1 - h(Q')) with Q' = (1-q)Q + q(1-Q), in bits per pulse.
double info_ab(const OpticalSetup& s, double q);

}  // namespace qkd
