#include "milburn/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace milburn {

namespace {

void check_mode(int mode) {
    if (mode < 1 || mode > 3) {
        throw std::out_of_range("mode index must be 1, 2 or 3, got " + std::to_string(mode));
    }
}

void check_dims(const FockDims& a, const FockDims& b, const char* where) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
    }
}

// Poisson log-mass of level n for mean |alpha|^2.
double log_coherent_prob(double mean, int n) {
    if (mean == 0.0) {
        return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

// Tail mass sum_{n >= cutoff} p_n, summed from far out downwards.
double coherent_tail(double mean, int cutoff) {
    if (mean == 0.0) {
        return cutoff > 0 ? 0.0 : 1.0;
    }
    const int far = std::max(cutoff, static_cast<int>(mean + 40.0 * std::sqrt(mean) + 60.0));
    double tail = 0.0;
    for (int n = far; n >= cutoff; --n) {
        tail += std::exp(log_coherent_prob(mean, n));
    }
    return tail;
}

}  // namespace

FockDims::FockDims(int a, int b, int c) : n1(a), n2(b), n3(c) {
    if (a < 1 || b < 1 || c < 1) {
        throw std::invalid_argument("Fock dimensions must all be >= 1");
    }
}

int FockDims::operator[](int mode) const {
    check_mode(mode);
    return mode == 1 ? n1 : (mode == 2 ? n2 : n3);
}

std::array<int, 3> FockDims::occupations(std::size_t idx) const noexcept {
    const int k = static_cast<int>(idx % static_cast<std::size_t>(n3));
    idx /= static_cast<std::size_t>(n3);
    const int j = static_cast<int>(idx % static_cast<std::size_t>(n2));
    const int i = static_cast<int>(idx / static_cast<std::size_t>(n2));
    return {i, j, k};
}

int FockDims::min_dim() const noexcept { return std::min({n1, n2, n3}); }

DensityMatrix DensityMatrix::pure(const FockState& psi) {
    return {psi.dims, psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityMatrix::trace() const { return matrix.trace().real(); }

double DensityMatrix::purity() const {
    // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho
    return matrix.cwiseAbs2().sum();
}

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const Eigen::MatrixXcd herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

FockOperator annihilation(const FockDims& dims, int mode) {
    check_mode(mode);
    const std::size_t d = dims.total();
    FockOperator op{dims, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                 static_cast<Eigen::Index>(d))};
    for (std::size_t col = 0; col < d; ++col) {
        auto occ = dims.occupations(col);
        const int n = occ[static_cast<std::size_t>(mode - 1)];
        if (n == 0) continue;
        occ[static_cast<std::size_t>(mode - 1)] = n - 1;
        const std::size_t row = dims.index(occ[0], occ[1], occ[2]);
        op.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = std::sqrt(n);
    }
    return op;
}

FockOperator creation(const FockDims& dims, int mode) {
    FockOperator op = annihilation(dims, mode);
    op.matrix.adjointInPlace();
    return op;
}

FockOperator number_operator(const FockDims& dims, int mode) {
    check_mode(mode);
    const std::size_t d = dims.total();
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        diag(static_cast<Eigen::Index>(i)) = dims.occupations(i)[static_cast<std::size_t>(mode - 1)];
    }
    return {dims, diag.asDiagonal()};
}

FockOperator identity(const FockDims& dims) {
    const auto d = static_cast<Eigen::Index>(dims.total());
    return {dims, Eigen::MatrixXcd::Identity(d, d)};
}

CoherentAmplitudes coherent_amplitudes(cplx alpha, int cutoff) {
    if (cutoff < 1) {
        throw std::invalid_argument("cutoff must be >= 1");
    }
    const double mean = std::norm(alpha);
    CoherentAmplitudes out;
    out.c.resize(cutoff);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!) with the magnitude taken in log space
    const double arg = std::arg(alpha);
    for (int n = 0; n < cutoff; ++n) {
        const double lp = log_coherent_prob(mean, n);
        out.c(n) = std::isinf(lp) ? cplx{0.0, 0.0} : std::polar(std::exp(0.5 * lp), n * arg);
    }
    out.tail_mass = coherent_tail(mean, cutoff);
    return out;
}

int required_cutoff(cplx alpha, double budget) {
    const double mean = std::norm(alpha);
    int cutoff = 1;
    while (coherent_tail(mean, cutoff) > budget) ++cutoff;
    return cutoff;
}

FockState coherent_state(const FockDims& dims, int mode, cplx alpha, double leakage_budget) {
    check_mode(mode);
    const int cutoff = dims[mode];
    const CoherentAmplitudes amps = coherent_amplitudes(alpha, cutoff);
    if (amps.tail_mass > leakage_budget) {
        const int need = required_cutoff(alpha, leakage_budget);
        throw TruncationError("coherent state |alpha|^2=" + std::to_string(std::norm(alpha)) +
                                  " leaks " + std::to_string(amps.tail_mass) +
                                  " above cutoff " + std::to_string(cutoff) +
                                  "; mode " + std::to_string(mode) + " needs dimension >= " +
                                  std::to_string(need),
                              need);
    }
    FockState psi{dims, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dims.total())),
                  amps.tail_mass};
    for (int n = 0; n < cutoff; ++n) {
        std::array<int, 3> occ{0, 0, 0};
        occ[static_cast<std::size_t>(mode - 1)] = n;
        psi.amplitudes(static_cast<Eigen::Index>(dims.index(occ[0], occ[1], occ[2]))) = amps.c(n);
    }
    return psi;
}

FockOperator hamiltonian_fock(const SystemParams& p, const FockDims& dims) {
    const std::size_t d = dims.total();
    const Eigen::Matrix3d m = single_particle_matrix(p);
    FockOperator h{dims, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d))};
    for (std::size_t col = 0; col < d; ++col) {
        const auto occ = dims.occupations(col);
        double diag = 0.0;
        for (int i = 0; i < 3; ++i) diag += m(i, i) * occ[static_cast<std::size_t>(i)];
        h.matrix(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = diag;
        // a_i^+ a_j moves one quantum from j to i
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j || m(i, j) == 0.0) continue;
                auto target = occ;
                const int nj = target[static_cast<std::size_t>(j)];
                const int ni = target[static_cast<std::size_t>(i)];
                if (nj == 0 || ni + 1 >= dims[i + 1]) continue;
                target[static_cast<std::size_t>(j)] = nj - 1;
                target[static_cast<std::size_t>(i)] = ni + 1;
                const std::size_t row = dims.index(target[0], target[1], target[2]);
                h.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                    m(i, j) * std::sqrt(static_cast<double>(nj) * (ni + 1));
            }
        }
    }
    return h;
}

double expectation(const FockState& psi, const FockOperator& observable) {
    check_dims(psi.dims, observable.dims, "expectation");
    const cplx v = psi.amplitudes.dot(observable.matrix * psi.amplitudes);
    return v.real();
}

double expectation(const DensityMatrix& rho, const FockOperator& observable) {
    check_dims(rho.dims, observable.dims, "expectation");
    // tr(rho A) = sum_ij rho_ij A_ji
    const cplx v = rho.matrix.cwiseProduct(observable.matrix.transpose()).sum();
    return v.real();
}

std::array<double, 3> mode_occupations(const FockState& psi) {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < psi.dims.total(); ++i) {
        const double w = std::norm(psi.amplitudes(static_cast<Eigen::Index>(i)));
        const auto occ = psi.dims.occupations(i);
        for (std::size_t m = 0; m < 3; ++m) out[m] += w * occ[m];
    }
    return out;
}

std::vector<std::vector<std::size_t>> excitation_sectors(const FockDims& dims) {
    std::vector<std::vector<std::size_t>> sectors(
        static_cast<std::size_t>(dims.n1 + dims.n2 + dims.n3 - 2));
    for (std::size_t i = 0; i < dims.total(); ++i) {
        const auto occ = dims.occupations(i);
        sectors[static_cast<std::size_t>(occ[0] + occ[1] + occ[2])].push_back(i);
    }
    return sectors;
}

}  // namespace milburn
