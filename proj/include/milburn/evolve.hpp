// evolve.hpp: evolution engines that do not use the closed forms.
//
//  * CoherentOracle: Poisson sum over unitary kicks, acting on the three
//    coherent amplitudes (quadratic H keeps coherent states coherent).
//  * FockSeriesEngine: the same sum on a truncated Fock space.
//  * integrate_lindblad: RK4 on the second-order (Lindblad) truncation.
//  * schrodinger_occupations: the gamma -> infinity limit, via a 3x3 Pade
//    matrix exponential.

#pragma once

#include "milburn/analytic.hpp"
#include "milburn/fock.hpp"
#include "milburn/spectral.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace milburn {

inline constexpr double kDefaultSeriesTol = 1e-12;

// ---------------------------------------------------------------- Poisson

struct SeriesTruncation {
    double mean{0.0};       // gamma t
    long k_max{0};
    double tail_bound{0.0};  // exact Poisson mass above k_max
};

/// Smallest k_max whose Poisson(gamma_t) upper tail is <= tol. A Chernoff
/// bound brackets the search; the tail itself is summed backwards in log space.
SeriesTruncation poisson_kmax(double gamma_t, double tol, long k_limit = 50'000'000);

/// Poisson weights e^{-m} m^k / k! for k = 0..k_max, evaluated in log space.
std::vector<double> poisson_weights(double mean, long k_max);

// ---------------------------------------------------------------- engines

enum class Engine { analytic, coherent, fock, lindblad };

std::string_view engine_name(Engine e) noexcept;
std::optional<Engine> parse_engine(std::string_view name) noexcept;

struct TimeSeries {
    Engine engine{Engine::analytic};
    SystemParams params;
    std::vector<double> times;
    std::vector<double> n1;
    std::vector<double> n2;
    std::vector<double> n3;
    std::vector<double> trace;  // filled by fock and lindblad engines

    std::size_t size() const noexcept { return times.size(); }
    PhotonNumbers at(std::size_t i) const { return {n1[i], n2[i], n3[i]}; }
    void push_back(double t, const PhotonNumbers& n);
};

/// Closed forms sampled on a grid.
TimeSeries analytic_series(const SystemParams& p, const std::vector<double>& times);

/// |(e^{-iMt} (alpha, 0, 0)^T)_j|^2 with the exponential taken by Pade
/// approximation (no eigendecomposition).
PhotonNumbers schrodinger_occupations(const SystemParams& p, double t);

class CoherentOracle {
public:
    explicit CoherentOracle(const SystemParams& p, double tol = kDefaultSeriesTol);

    /// |beta_j(k)|^2 after k kicks of e^{-iM/gamma}.
    PhotonNumbers per_k(long k);
    PhotonNumbers at(double t);
    TimeSeries series(const std::vector<double>& times);

private:
    void extend(long k_max);

    SystemParams params_;
    double tol_;
    Eigen::Vector3d energies_;
    Eigen::Matrix3d vectors_;
    Eigen::Vector3cd initial_coeffs_;  // eigenbasis coefficients of (alpha, 0, 0)
    std::vector<PhotonNumbers> cache_;
};

PhotonNumbers coherent_oracle(const SystemParams& p, double t, double tol = kDefaultSeriesTol);

// ------------------------------------------------------ Fock-space series

/// Hermitian eigensystem of a truncated H, block by total excitation number.
/// Throws std::invalid_argument if H couples different excitation sectors or
/// carries an imaginary part.
class SectorEigensystem {
public:
    struct Block {
        std::vector<std::size_t> indices;  // Fock basis indices of the sector
        Eigen::VectorXd energies;
        Eigen::MatrixXd vectors;  // columns are eigenvectors, rows follow indices
    };

    explicit SectorEigensystem(const FockOperator& h);

    const FockDims& dims() const noexcept { return dims_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    /// Lab amplitudes -> eigen coefficients, stored block by block.
    std::vector<Eigen::VectorXcd> to_eigen(const Eigen::VectorXcd& lab) const;
    Eigen::VectorXcd to_lab(const std::vector<Eigen::VectorXcd>& coeffs) const;

private:
    FockDims dims_;
    std::vector<Block> blocks_;
};

struct FockSeriesOptions {
    double tol{kDefaultSeriesTol};
    double leakage_budget{kDefaultLeakageBudget};
    long k_limit{5'000'000};
};

struct FockSeriesResult {
    PhotonNumbers n;
    double trace{1.0};
    double leakage{0.0};
    SeriesTruncation truncation;
};

class FockSeriesEngine {
public:
    FockSeriesEngine(const SystemParams& p, const FockDims& dims, FockSeriesOptions opts = {});

    const FockState& initial_state() const noexcept { return psi0_; }
    double leakage() const noexcept { return psi0_.tail_mass; }

    /// |psi_k> = U^k |psi(0)>, U = e^{-iH/gamma}.
    FockState kicked_state(long k) const;

    FockSeriesResult observables(double t);
    TimeSeries series(const std::vector<double>& times);

    /// rho(t) = e^{-gt} sum_k (gt)^k/k! |psi_k><psi_k| as a dense matrix.
    DensityMatrix density(double t) const;

    /// tr(rho(t)^2) without forming rho.
    double purity(double t) const;

private:
    void extend(long k_max);

    SystemParams params_;
    FockSeriesOptions opts_;
    FockState psi0_;
    SectorEigensystem eig_;
    std::vector<Eigen::VectorXcd> coeffs0_;
    std::vector<PhotonNumbers> cache_;
    std::vector<double> norms_;
};

DensityMatrix milburn_fock_series(const SystemParams& p, const FockDims& dims, double t,
                                  FockSeriesOptions opts = {});

struct PurityReport {
    std::vector<double> times;
    std::vector<double> purity;
    int violations{0};          // grid steps where purity increased by more than slack
    double max_increase{0.0};
};

PurityReport purity_scan(FockSeriesEngine& engine, const std::vector<double>& times,
                         double slack = 1e-12);

// --------------------------------------------------------------- Lindblad

/// Coefficient of the double commutator: `half` is the second-order Taylor
/// truncation of the Milburn map, -(1/2g)[H,[H,rho]]; `printed` keeps the
/// -(1/g)[H,[H,rho]] form often quoted for it.
enum class LindbladConvention { half, printed };

double dissipator_coefficient(double gamma, LindbladConvention conv) noexcept;

/// -i[H, rho] - c [H, [H, rho]] with dense commutators.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const FockOperator& h, double gamma,
                           LindbladConvention conv = LindbladConvention::half);

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LindbladOptions {
    double step{0.01};
    double halving_tol{1e-6};
    bool verify_halving{true};
    LindbladConvention convention{LindbladConvention::half};
    double leakage_budget{kDefaultLeakageBudget};
};

struct LindbladResult {
    TimeSeries series;
    double halving_deviation{0.0};  // max |n_j(h) - n_j(h/2)| over the grid
};

/// Fixed-step RK4 on the Lindblad equation. Integration runs in the sector
/// eigenbasis of H, where [H, .] acts entrywise; only the excitation-diagonal
/// blocks of rho are carried since number observables do not see the rest.
/// Hermiticity is restored after every step; the trace is not renormalized.
/// Throws ConvergenceError when halving the step moves the output by more
/// than halving_tol.
LindbladResult integrate_lindblad(const SystemParams& p, const FockDims& dims,
                                  const std::vector<double>& times, LindbladOptions opts = {});

/// Evenly spaced grid of `steps` points on [0, t_max].
std::vector<double> uniform_grid(double t_max, int steps);

}  // namespace milburn
