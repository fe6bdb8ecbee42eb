#include "milburn/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace milburn {

namespace {

struct Trig {
    double c2;  // cos^2 phi
    double s2;  // sin^2 phi
};

Trig trig(const SpectralData& s) noexcept {
    const double c = std::cos(s.phi);
    const double sn = std::sin(s.phi);
    return {c * c, sn * sn};
}

// 1 + (3 + cos 4 phi)/4, the constant part of the mode-1/2 brackets.
double constant_part(const SpectralData& s) noexcept {
    return 1.0 + 0.25 * (3.0 + std::cos(4.0 * s.phi));
}

}  // namespace

CoherentTriple rotated_initial_amplitudes(const SystemParams& p, const SpectralData& s) noexcept {
    const double ct = std::cos(s.theta);
    const double st = std::sin(s.theta);
    return {p.alpha * ct, p.alpha * std::cos(s.phi) * st, -p.alpha * std::sin(s.phi) * st};
}

double damping_factor(double delta, double gamma, double t) noexcept {
    const double gt = gamma * t;
    const double x = delta / gamma;
    const double h = std::sin(0.5 * x);
    // cos x - 1 = -2 sin^2(x/2) avoids cancellation when delta << gamma
    return 2.0 * std::exp(-2.0 * gt * h * h) * std::cos(gt * std::sin(x));
}

double damping_envelope(double delta, double gamma, double t) noexcept {
    const double h = std::sin(0.5 * delta / gamma);
    return 2.0 * std::exp(-2.0 * gamma * t * h * h);
}

double mean_n3(const SystemParams& p, const SpectralData& s, double t) noexcept {
    const Trig tr = trig(s);
    return p.alpha_sq() * tr.c2 * tr.s2 * (1.0 - 0.5 * damping_factor(s.Omega - s.Omega2, p.gamma, t));
}

double mean_n1(const SystemParams& p, const SpectralData& s, double t) noexcept {
    const Trig tr = trig(s);
    const double bracket = constant_part(s) +
                           damping_factor(s.Omega - s.Omega2, p.gamma, t) * tr.c2 * tr.s2 +
                           damping_factor(s.omega_minus - s.Omega2, p.gamma, t) * tr.c2 +
                           damping_factor(s.omega_minus - s.Omega, p.gamma, t) * tr.s2;
    return 0.25 * p.alpha_sq() * bracket;
}

double mean_n2(const SystemParams& p, const SpectralData& s, double t) noexcept {
    const Trig tr = trig(s);
    const double bracket = constant_part(s) +
                           damping_factor(s.Omega - s.Omega2, p.gamma, t) * tr.c2 * tr.s2 -
                           damping_factor(s.omega_minus - s.Omega2, p.gamma, t) * tr.c2 -
                           damping_factor(s.omega_minus - s.Omega, p.gamma, t) * tr.s2;
    return 0.25 * p.alpha_sq() * bracket;
}

PhotonNumbers mean_photon_numbers(const SystemParams& p, const SpectralData& s, double t) noexcept {
    return {mean_n1(p, s, t), mean_n2(p, s, t), mean_n3(p, s, t)};
}

PhotonNumbers per_k_expectations(const SystemParams& p, const SpectralData& s, long k) noexcept {
    const Trig tr = trig(s);
    const double a2 = p.alpha_sq();
    const double kg = static_cast<double>(k) / p.gamma;
    const double c_33 = std::cos(kg * (s.Omega - s.Omega2));
    const double c_12 = std::cos(kg * (s.omega_minus - s.Omega2));
    const double c_13 = std::cos(kg * (s.omega_minus - s.Omega));
    const double base = 1.0 + (tr.c2 * tr.c2 + tr.s2 * tr.s2) + 2.0 * tr.s2 * tr.c2 * c_33;
    const double swing = 2.0 * tr.c2 * c_12 + 2.0 * tr.s2 * c_13;
    return {0.25 * a2 * (base + swing), 0.25 * a2 * (base - swing),
            a2 * tr.c2 * tr.s2 * (1.0 - c_33)};
}

double steady_n3(const SystemParams& p, const SpectralData& s) noexcept {
    const Trig tr = trig(s);
    return p.alpha_sq() * tr.c2 * tr.s2;
}

double asymptotic_time(const SystemParams& p, const SpectralData& s) noexcept {
    const std::array<double, 3> beats{s.Omega - s.Omega2, s.omega_minus - s.Omega2,
                                      s.omega_minus - s.Omega};
    const double zero = 1e-9 * (std::abs(p.omega) + std::abs(p.lambda) + std::abs(p.g));
    double rate = std::numeric_limits<double>::infinity();
    for (double d : beats) {
        if (std::abs(d) <= zero) continue;
        const double h = std::sin(0.5 * d / p.gamma);
        const double one_minus_cos = 2.0 * h * h;
        if (one_minus_cos > 0.0) rate = std::min(rate, one_minus_cos);
    }
    if (!std::isfinite(rate)) return 0.0;
    return 50.0 / rate / p.gamma;
}

}  // namespace milburn
