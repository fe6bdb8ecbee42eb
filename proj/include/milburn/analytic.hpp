// analytic.hpp: closed-form photon numbers under intrinsic decoherence for a
// coherent state in mode 1 and vacuum in modes 2 and 3.

#pragma once

#include "milburn/spectral.hpp"

#include <complex>

namespace milburn {

struct CoherentTriple {
    std::complex<double> beta1;
    std::complex<double> beta2;
    std::complex<double> beta3;
};

struct PhotonNumbers {
    double n1{0.0};
    double n2{0.0};
    double n3{0.0};

    double total() const noexcept { return n1 + n2 + n3; }
};

/// Rotated-frame image of |alpha, 0, 0>: (a cos t, a cos p sin t, -a sin p sin t).
CoherentTriple rotated_initial_amplitudes(const SystemParams& p, const SpectralData& s) noexcept;

/// f(d, t) = e^{-gt} [exp(gt e^{id/g}) + exp(gt e^{-id/g})] in real form:
/// 2 exp(-2 gt sin^2(d / 2g)) cos(gt sin(d/g)).
double damping_factor(double delta, double gamma, double t) noexcept;

/// 2 exp(-2 gt sin^2(d / 2g)), the envelope bounding |f|.
double damping_envelope(double delta, double gamma, double t) noexcept;

double mean_n1(const SystemParams& p, const SpectralData& s, double t) noexcept;
double mean_n2(const SystemParams& p, const SpectralData& s, double t) noexcept;
double mean_n3(const SystemParams& p, const SpectralData& s, double t) noexcept;
PhotonNumbers mean_photon_numbers(const SystemParams& p, const SpectralData& s, double t) noexcept;

/// <psi_k| n_j |psi_k> for the k-th unitary kick |psi_k> = e^{-ikH/g}|psi(0)>.
PhotonNumbers per_k_expectations(const SystemParams& p, const SpectralData& s, long k) noexcept;

/// |alpha|^2 cos^2 phi sin^2 phi, the t -> infinity value of <n3>.
double steady_n3(const SystemParams& p, const SpectralData& s) noexcept;

/// Time at which gamma t = 50 / (1 - cos(d_min / gamma)) for the smallest
/// nonzero beat |d| among (Omega - Omega2, w_- - Omega2, w_- - Omega); beats
/// below 1e-9 of the coupling scale count as degenerate.
/// Returns 0 when every beat vanishes.
double asymptotic_time(const SystemParams& p, const SpectralData& s) noexcept;

}  // namespace milburn
