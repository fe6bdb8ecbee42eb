// spectral.hpp: normal-mode decomposition of three RWA-coupled oscillators.
//
// H = w (n1 + n2 + n3) + l (a1^+ a2 + a2^+ a1) + g [a3 (a1^+ + a2^+) + h.c.]
//
// Two beam-splitter rotations (theta = pi/4 on modes 1-2, then phi on modes
// 2-3) bring H to  w_- n1 + Omega2 n2 + Omega n3  in the rotated frame.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>

namespace milburn {

struct SystemParams {
    double omega{1.0};
    double lambda{0.0};
    double g{0.0};
    double gamma{1.0};
    std::complex<double> alpha{0.0, 0.0};

    // Throws std::invalid_argument unless omega > 0 and gamma > 0 (both finite).
    void validate() const;

    double alpha_sq() const noexcept { return std::norm(alpha); }
};

struct SpectralData {
    double theta{std::numbers::pi / 4};
    double phi{0.0};
    double omega_minus{0.0};
    double omega_plus{0.0};
    double Omega{0.0};   // lower root, rotated mode 3
    double Omega2{0.0};  // upper root, rotated mode 2
};

/// phi = atan2(2 sqrt(2) g, w_+ - w) / 2, so lambda = 0 gives a defined pi/4.
double mixing_angle(const SystemParams& p) noexcept;

SpectralData effective_frequencies(const SystemParams& p) noexcept;

/// Single-particle matrix M with H = sum_ij M_ij a_i^+ a_j.
Eigen::Matrix3d single_particle_matrix(const SystemParams& p) noexcept;

/// Orthogonal O(pi/4, phi). Row r holds the lab-frame components of rotated
/// mode r, so M = O^T diag(w_-, Omega2, Omega) O and the rotated amplitudes of
/// a lab vector v are O v.
Eigen::Matrix3d rotation_images(double phi) noexcept;

/// Rotated-frame energies in the row order of rotation_images.
Eigen::Vector3d rotated_frequencies(const SpectralData& s) noexcept;

/// Off-diagonal element of the 2x2 block [[w_+, sqrt2 g], [sqrt2 g, w]]
/// after rotating it by phi. Zero when phi is the mixing angle.
double residual_coupling(const SystemParams& p, double phi) noexcept;

}  // namespace milburn
