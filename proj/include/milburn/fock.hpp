// fock.hpp: truncated three-mode Fock space.
//
// Basis index layout is row-major in (n1, n2, n3): mode 1 varies slowest,
// mode 3 fastest. Every operator is a dense complex matrix.

#pragma once

#include "milburn/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace milburn {

using cplx = std::complex<double>;

inline constexpr double kDefaultLeakageBudget = 1e-8;

/// Raised when a coherent state does not fit the requested cutoff.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required_dim)
        : std::runtime_error(what), required_dim_(required_dim) {}
    int required_dim() const noexcept { return required_dim_; }

private:
    int required_dim_;
};

struct FockDims {
    int n1{1};
    int n2{1};
    int n3{1};

    FockDims() = default;
    FockDims(int a, int b, int c);

    std::size_t total() const noexcept {
        return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) *
               static_cast<std::size_t>(n3);
    }
    int operator[](int mode) const;  // mode in {1, 2, 3}
    std::size_t index(int i, int j, int k) const noexcept {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n2) +
                static_cast<std::size_t>(j)) * static_cast<std::size_t>(n3) +
               static_cast<std::size_t>(k);
    }
    std::array<int, 3> occupations(std::size_t idx) const noexcept;
    int min_dim() const noexcept;

    friend bool operator==(const FockDims&, const FockDims&) = default;
};

struct FockOperator {
    FockDims dims;
    Eigen::MatrixXcd matrix;
};

struct FockState {
    FockDims dims;
    Eigen::VectorXcd amplitudes;
    double tail_mass{0.0};  // probability lost above the cutoff
};

struct DensityMatrix {
    FockDims dims;
    Eigen::MatrixXcd matrix;

    static DensityMatrix pure(const FockState& psi);

    double trace() const;
    double purity() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
};

FockOperator annihilation(const FockDims& dims, int mode);
FockOperator creation(const FockDims& dims, int mode);
FockOperator number_operator(const FockDims& dims, int mode);
FockOperator identity(const FockDims& dims);

/// Single-mode coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!), n < cutoff.
/// Returned alongside the probability mass above the cutoff.
struct CoherentAmplitudes {
    Eigen::VectorXcd c;
    double tail_mass{0.0};
};
CoherentAmplitudes coherent_amplitudes(cplx alpha, int cutoff);

/// Smallest single-mode cutoff whose coherent tail mass is <= budget.
int required_cutoff(cplx alpha, double budget);

/// Coherent state in `mode`, vacuum in the other two. Throws TruncationError
/// when the tail mass exceeds `leakage_budget`.
FockState coherent_state(const FockDims& dims, int mode, cplx alpha,
                         double leakage_budget = kDefaultLeakageBudget);

/// Three-mode Hamiltonian on the truncated space, assembled entry by entry.
FockOperator hamiltonian_fock(const SystemParams& p, const FockDims& dims);

double expectation(const FockState& psi, const FockOperator& observable);
double expectation(const DensityMatrix& rho, const FockOperator& observable);

/// Number-diagonal occupations <n_1>, <n_2>, <n_3> for a state.
std::array<double, 3> mode_occupations(const FockState& psi);

/// Basis indices grouped by total excitation n1 + n2 + n3, ascending.
std::vector<std::vector<std::size_t>> excitation_sectors(const FockDims& dims);

}  // namespace milburn
