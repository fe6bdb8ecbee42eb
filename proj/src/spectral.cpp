#include "milburn/spectral.hpp"

#include <cmath>
#include <string>

namespace milburn {

void SystemParams::validate() const {
    if (!std::isfinite(omega) || omega <= 0.0) {
        throw std::invalid_argument("omega must be finite and > 0, got " + std::to_string(omega));
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw std::invalid_argument("gamma must be finite and > 0, got " + std::to_string(gamma));
    }
    if (!std::isfinite(lambda) || !std::isfinite(g) || !std::isfinite(alpha.real()) ||
        !std::isfinite(alpha.imag())) {
        throw std::invalid_argument("lambda, g and alpha must be finite");
    }
}

double mixing_angle(const SystemParams& p) noexcept {
    const double omega_plus = p.omega + p.lambda;
    return 0.5 * std::atan2(2.0 * std::numbers::sqrt2 * p.g, omega_plus - p.omega);
}

SpectralData effective_frequencies(const SystemParams& p) noexcept {
    SpectralData s;
    s.omega_minus = p.omega - p.lambda;
    s.omega_plus = p.omega + p.lambda;
    const double split = s.omega_plus - p.omega;
    const double root = std::sqrt(8.0 * p.g * p.g + split * split);
    s.Omega = 0.5 * ((s.omega_plus + p.omega) - root);
    s.Omega2 = 0.5 * ((s.omega_plus + p.omega) + root);
    s.phi = mixing_angle(p);
    return s;
}

Eigen::Matrix3d single_particle_matrix(const SystemParams& p) noexcept {
    Eigen::Matrix3d m;
    m << p.omega, p.lambda, p.g,
         p.lambda, p.omega, p.g,
         p.g, p.g, p.omega;
    return m;
}

Eigen::Matrix3d rotation_images(double phi) noexcept {
    // R a_i R^+ = sum_j S_ij a_j with R = R_2 R_12; O = S^T.
    const double c = std::cos(std::numbers::pi / 4);
    const double s = std::sin(std::numbers::pi / 4);
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    Eigen::Matrix3d sub;
    sub << c, s * cp, -s * sp,
           -s, c * cp, -c * sp,
           0.0, sp, cp;
    return sub.transpose();
}

Eigen::Vector3d rotated_frequencies(const SpectralData& s) noexcept {
    return {s.omega_minus, s.Omega2, s.Omega};
}

double residual_coupling(const SystemParams& p, double phi) noexcept {
    const double omega_plus = p.omega + p.lambda;
    const double c2 = std::cos(2.0 * phi);
    const double s2 = std::sin(2.0 * phi);
    return 0.5 * ((p.omega - omega_plus) * s2 + 2.0 * std::numbers::sqrt2 * p.g * c2);
}

}  // namespace milburn
