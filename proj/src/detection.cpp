#include "qkd/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/qmath.hpp"

namespace qkd {

namespace {

void check_setup(const OpticalSetup& s) {
    if (s.eta <= 0.0 || s.eta > 1.0)
        throw std::invalid_argument("OpticalSetup: eta outside (0, 1]");
    if (s.p_dark < 0.0 || s.p_dark >= 1.0)
        throw std::invalid_argument("OpticalSetup: p_dark outside [0, 1)");
    if (s.visibility < 0.0 || s.visibility > 1.0)
        throw std::invalid_argument("OpticalSetup: visibility outside [0, 1]");
    if (s.distance_km < 0.0)
        throw std::invalid_argument("OpticalSetup: negative distance");
}

void check_n(int n) {
    if (n < 0) throw std::invalid_argument("photon number must be >= 0");
}

void check_v(double v) {
    if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("visibility outside [0, 1]");
}

// Vacuum Poisson probability p(0 | x) = e^{-x}.
double p0(double x) { return std::exp(-x); }

}  // namespace

double OpticalSetup::transmission() const {
    return std::pow(10.0, -alpha_db_km * distance_km / 10.0);
}

double p_zero_click(int n, const OpticalSetup& s) {
    check_setup(s);
    check_n(n);
    const double pd = 1.0 - s.p_dark;
    return pd * pd * std::pow(1.0 - s.eta, n);
}

double p_acc_z(int n, double v, const OpticalSetup& s) {
    check_setup(s);
    check_n(n);
    check_v(v);
    const double pd = 1.0 - s.p_dark;
    const double f = 0.5 * (1.0 + v);
    return pd * (std::pow(1.0 - f * s.eta, n) - pd * std::pow(1.0 - s.eta, n));
}

double p_acc_x(int n, const OpticalSetup& s) {
    check_setup(s);
    check_n(n);
    const double pd = 1.0 - s.p_dark;
    return pd *
           (std::pow(1.0 - 0.5 * s.eta, n) - pd * std::pow(1.0 - s.eta, n));
}

double p_acc(int n, double v, const OpticalSetup& s) {
    return 0.5 * (p_acc_x(n, s) + p_acc_z(n, v, s));
}

double p2_z(int n, double v, const OpticalSetup& s) {
    check_setup(s);
    check_n(n);
    check_v(v);
    const double pd = 1.0 - s.p_dark;
    const double f = 0.5 * (1.0 + v);
    const double d = 0.5 * (1.0 - v);
    return 1.0 -
           pd * (std::pow(1.0 - f * s.eta, n) + std::pow(1.0 - d * s.eta, n)) +
           pd * pd * std::pow(1.0 - s.eta, n);
}

double p2_x(int n, const OpticalSetup& s) {
    return 1.0 - p_zero_click(n, s) - 2.0 * p_acc_x(n, s);
}

RateBundle rates(const OpticalSetup& s) {
    check_setup(s);
    if (s.mu <= 0.0) throw std::invalid_argument("rates: mu must be > 0");
    const double pd = 1.0 - s.p_dark;
    const double x = s.mu * s.transmission() * s.eta;
    const double f = s.fidelity();
    const double d = s.disturbance();

    RateBundle r;
    r.c0 = pd * pd * p0(x);
    r.c_acc_z = pd * (p0(f * x) - pd * p0(x));
    r.c_acc_x = pd * (p0(0.5 * x) - pd * p0(x));
    r.c_acc = 0.5 * (r.c_acc_x + r.c_acc_z);
    r.c2_z = 1.0 - pd * (p0(f * x) + p0(d * x)) + pd * pd * p0(x);
    const double miss_x = 1.0 - pd * p0(0.5 * x);
    r.c2_x = miss_x * miss_x;
    r.qber = r.c_acc > 0.0 ? 0.5 * r.c_acc_z / r.c_acc : 0.0;
    return r;
}

double info_ab(const OpticalSetup& s, double q) {
    if (q < 0.0 || q > 0.5) throw std::invalid_argument("info_ab: bad q");
    const RateBundle r = rates(s);
    const double qp = (1.0 - q) * r.qber + q * (1.0 - r.qber);
    return r.c_acc * (1.0 - binary_entropy(qp));
}

}  // namespace qkd
