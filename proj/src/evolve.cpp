#include "milburn/evolve.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace milburn {

namespace {

double log_poisson(double mean, long k) {
    if (mean == 0.0) {
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

// log of the Chernoff bound P(X >= k) <= e^{-m} (e m / k)^k, valid for k > m.
double log_chernoff(double mean, long k) {
    const double kk = static_cast<double>(k);
    return -mean + kk - kk * std::log(kk / mean);
}

void check_times(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) {
            throw std::invalid_argument("time grid entries must be finite and >= 0");
        }
        if (i > 0 && times[i] < times[i - 1]) {
            throw std::invalid_argument("time grid must be nondecreasing");
        }
    }
}

}  // namespace

SeriesTruncation poisson_kmax(double gamma_t, double tol, long k_limit) {
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::invalid_argument("series tolerance must lie in (0, 1)");
    }
    if (!std::isfinite(gamma_t) || gamma_t < 0.0) {
        throw std::invalid_argument("gamma t must be finite and >= 0");
    }
    SeriesTruncation tr;
    tr.mean = gamma_t;
    if (gamma_t == 0.0) {
        return tr;
    }
    const long floor_k = static_cast<long>(std::ceil(gamma_t));

    // Far end: Chernoff remainder below tol * 1e-6.
    const double log_far = std::log(tol) - 6.0 * std::numbers::ln10;
    long excess = std::max(8L, static_cast<long>(std::sqrt(gamma_t)));
    long k_far = floor_k + excess;
    while (log_chernoff(gamma_t, k_far + 1) > log_far) {
        excess *= 2;
        k_far = floor_k + excess;
        if (k_far > k_limit) {
            throw std::overflow_error("Poisson series needs more than k_limit terms");
        }
    }
    const double remainder = std::exp(log_chernoff(gamma_t, k_far + 1));

    // tail(K) = sum_{k=K+1}^{k_far} p_k, accumulated downward.
    double tail = 0.0;
    long k = k_far;
    while (k > floor_k) {
        const double next = tail + std::exp(log_poisson(gamma_t, k));
        if (next + remainder > tol) break;
        tail = next;
        --k;
    }
    if (k > k_limit) {
        throw std::overflow_error("Poisson series needs more than k_limit terms");
    }
    tr.k_max = k;
    tr.tail_bound = tail + remainder;
    return tr;
}

std::vector<double> poisson_weights(double mean, long k_max) {
    std::vector<double> w(static_cast<std::size_t>(k_max + 1));
    for (long k = 0; k <= k_max; ++k) {
        w[static_cast<std::size_t>(k)] = std::exp(log_poisson(mean, k));
    }
    return w;
}

std::string_view engine_name(Engine e) noexcept {
    switch (e) {
        case Engine::analytic: return "analytic";
        case Engine::coherent: return "coherent";
        case Engine::fock: return "fock";
        case Engine::lindblad: return "lindblad";
    }
    return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name) noexcept {
    for (Engine e : {Engine::analytic, Engine::coherent, Engine::fock, Engine::lindblad}) {
        if (engine_name(e) == name) return e;
    }
    return std::nullopt;
}

void TimeSeries::push_back(double t, const PhotonNumbers& n) {
    times.push_back(t);
    n1.push_back(n.n1);
    n2.push_back(n.n2);
    n3.push_back(n.n3);
}

TimeSeries analytic_series(const SystemParams& p, const std::vector<double>& times) {
    p.validate();
    check_times(times);
    const SpectralData s = effective_frequencies(p);
    TimeSeries out;
    out.engine = Engine::analytic;
    out.params = p;
    for (double t : times) out.push_back(t, mean_photon_numbers(p, s, t));
    return out;
}

PhotonNumbers schrodinger_occupations(const SystemParams& p, double t) {
    const Eigen::Matrix3cd gen = std::complex<double>(0.0, -t) * single_particle_matrix(p).cast<cplx>();
    const Eigen::Matrix3cd u = gen.exp();
    const Eigen::Vector3cd beta = u.col(0) * p.alpha;
    return {std::norm(beta(0)), std::norm(beta(1)), std::norm(beta(2))};
}

// ---------------------------------------------------------------- coherent

CoherentOracle::CoherentOracle(const SystemParams& p, double tol) : params_(p), tol_(tol) {
    p.validate();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(single_particle_matrix(p));
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    initial_coeffs_ = vectors_.row(0).transpose().cast<cplx>() * p.alpha;
}

void CoherentOracle::extend(long k_max) {
    for (long k = static_cast<long>(cache_.size()); k <= k_max; ++k) {
        const double kg = static_cast<double>(k) / params_.gamma;
        Eigen::Vector3cd c;
        for (int m = 0; m < 3; ++m) {
            c(m) = initial_coeffs_(m) * std::polar(1.0, -kg * energies_(m));
        }
        const Eigen::Vector3cd beta = vectors_.cast<cplx>() * c;
        cache_.push_back({std::norm(beta(0)), std::norm(beta(1)), std::norm(beta(2))});
    }
}

PhotonNumbers CoherentOracle::per_k(long k) {
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    extend(k);
    return cache_[static_cast<std::size_t>(k)];
}

PhotonNumbers CoherentOracle::at(double t) {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("t must be >= 0");
    const double mean = params_.gamma * t;
    const SeriesTruncation tr = poisson_kmax(mean, tol_);
    extend(tr.k_max);
    const std::vector<double> w = poisson_weights(mean, tr.k_max);
    PhotonNumbers n;
    for (std::size_t k = 0; k < w.size(); ++k) {
        n.n1 += w[k] * cache_[k].n1;
        n.n2 += w[k] * cache_[k].n2;
        n.n3 += w[k] * cache_[k].n3;
    }
    return n;
}

TimeSeries CoherentOracle::series(const std::vector<double>& times) {
    check_times(times);
    TimeSeries out;
    out.engine = Engine::coherent;
    out.params = params_;
    for (double t : times) out.push_back(t, at(t));
    return out;
}

PhotonNumbers coherent_oracle(const SystemParams& p, double t, double tol) {
    CoherentOracle oracle(p, tol);
    return oracle.at(t);
}

// ------------------------------------------------------------ Fock series

SectorEigensystem::SectorEigensystem(const FockOperator& h) : dims_(h.dims) {
    const auto d = static_cast<Eigen::Index>(dims_.total());
    if (h.matrix.rows() != d || h.matrix.cols() != d) {
        throw std::invalid_argument("SectorEigensystem: operator does not match its dims");
    }
    const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
    if (h.matrix.imag().cwiseAbs().maxCoeff() > 1e-14 * scale) {
        throw std::invalid_argument("SectorEigensystem: Hamiltonian must be real symmetric");
    }
    std::vector<int> sector_of(dims_.total());
    for (std::size_t i = 0; i < dims_.total(); ++i) {
        const auto occ = dims_.occupations(i);
        sector_of[i] = occ[0] + occ[1] + occ[2];
    }
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            if (sector_of[static_cast<std::size_t>(r)] != sector_of[static_cast<std::size_t>(c)] &&
                std::abs(h.matrix(r, c)) > 1e-14 * scale) {
                throw std::invalid_argument(
                    "SectorEigensystem: Hamiltonian couples different excitation sectors");
            }
        }
    }
    for (auto& idx : excitation_sectors(dims_)) {
        if (idx.empty()) continue;
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd block(n, n);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                block(a, b) = h.matrix(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]),
                                       static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]))
                                  .real();
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        if (es.info() != Eigen::Success) {
            throw std::runtime_error("SectorEigensystem: eigendecomposition failed");
        }
        blocks_.push_back({std::move(idx), es.eigenvalues(), es.eigenvectors()});
    }
}

std::vector<Eigen::VectorXcd> SectorEigensystem::to_eigen(const Eigen::VectorXcd& lab) const {
    std::vector<Eigen::VectorXcd> out;
    out.reserve(blocks_.size());
    for (const Block& b : blocks_) {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(b.indices.size()));
        for (std::size_t i = 0; i < b.indices.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = lab(static_cast<Eigen::Index>(b.indices[i]));
        }
        out.push_back(b.vectors.transpose().cast<cplx>() * v);
    }
    return out;
}

Eigen::VectorXcd SectorEigensystem::to_lab(const std::vector<Eigen::VectorXcd>& coeffs) const {
    Eigen::VectorXcd lab = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dims_.total()));
    for (std::size_t s = 0; s < blocks_.size(); ++s) {
        const Eigen::VectorXcd v = blocks_[s].vectors.cast<cplx>() * coeffs[s];
        for (std::size_t i = 0; i < blocks_[s].indices.size(); ++i) {
            lab(static_cast<Eigen::Index>(blocks_[s].indices[i])) = v(static_cast<Eigen::Index>(i));
        }
    }
    return lab;
}

FockSeriesEngine::FockSeriesEngine(const SystemParams& p, const FockDims& dims, FockSeriesOptions opts)
    : params_(p),
      opts_(opts),
      psi0_((p.validate(), coherent_state(dims, 1, p.alpha, opts.leakage_budget))),
      eig_(hamiltonian_fock(p, dims)),
      coeffs0_(eig_.to_eigen(psi0_.amplitudes)) {}

FockState FockSeriesEngine::kicked_state(long k) const {
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    const double kg = static_cast<double>(k) / params_.gamma;
    std::vector<Eigen::VectorXcd> c = coeffs0_;
    for (std::size_t s = 0; s < c.size(); ++s) {
        const Eigen::VectorXd& e = eig_.blocks()[s].energies;
        for (Eigen::Index m = 0; m < e.size(); ++m) c[s](m) *= std::polar(1.0, -kg * e(m));
    }
    return {psi0_.dims, eig_.to_lab(c), psi0_.tail_mass};
}

void FockSeriesEngine::extend(long k_max) {
    if (k_max > opts_.k_limit) {
        throw std::overflow_error("Fock series needs more than k_limit kicks");
    }
    for (long k = static_cast<long>(cache_.size()); k <= k_max; ++k) {
        const FockState psi = kicked_state(k);
        const auto occ = mode_occupations(psi);
        cache_.push_back({occ[0], occ[1], occ[2]});
        norms_.push_back(psi.amplitudes.squaredNorm());
    }
}

FockSeriesResult FockSeriesEngine::observables(double t) {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("t must be >= 0");
    FockSeriesResult r;
    r.leakage = psi0_.tail_mass;
    r.truncation = poisson_kmax(params_.gamma * t, opts_.tol, opts_.k_limit);
    extend(r.truncation.k_max);
    const std::vector<double> w = poisson_weights(r.truncation.mean, r.truncation.k_max);
    r.trace = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        r.n.n1 += w[k] * cache_[k].n1;
        r.n.n2 += w[k] * cache_[k].n2;
        r.n.n3 += w[k] * cache_[k].n3;
        r.trace += w[k] * norms_[k];
    }
    return r;
}

TimeSeries FockSeriesEngine::series(const std::vector<double>& times) {
    check_times(times);
    TimeSeries out;
    out.engine = Engine::fock;
    out.params = params_;
    for (double t : times) {
        const FockSeriesResult r = observables(t);
        out.push_back(t, r.n);
        out.trace.push_back(r.trace);
    }
    return out;
}

DensityMatrix FockSeriesEngine::density(double t) const {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("t must be >= 0");
    const SeriesTruncation tr = poisson_kmax(params_.gamma * t, opts_.tol, opts_.k_limit);
    const std::vector<double> w = poisson_weights(tr.mean, tr.k_max);
    const auto d = static_cast<Eigen::Index>(psi0_.dims.total());
    DensityMatrix rho{psi0_.dims, Eigen::MatrixXcd::Zero(d, d)};
    for (std::size_t k = 0; k < w.size(); ++k) {
        const FockState psi = kicked_state(static_cast<long>(k));
        rho.matrix.noalias() += w[k] * (psi.amplitudes * psi.amplitudes.adjoint());
    }
    return rho;
}

double FockSeriesEngine::purity(double t) const {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("t must be >= 0");
    const SeriesTruncation tr = poisson_kmax(params_.gamma * t, opts_.tol, opts_.k_limit);
    const std::vector<double> w = poisson_weights(tr.mean, tr.k_max);
    // <psi_k|psi_l> = sum_m |c_m|^2 e^{-i (l-k) E_m / gamma} depends on l - k only
    std::vector<double> overlap_sq(w.size());
    for (std::size_t d = 0; d < w.size(); ++d) {
        const double dg = static_cast<double>(d) / params_.gamma;
        cplx acc{0.0, 0.0};
        for (std::size_t s = 0; s < coeffs0_.size(); ++s) {
            const Eigen::VectorXd& e = eig_.blocks()[s].energies;
            for (Eigen::Index m = 0; m < e.size(); ++m) {
                acc += std::norm(coeffs0_[s](m)) * std::polar(1.0, -dg * e(m));
            }
        }
        overlap_sq[d] = std::norm(acc);
    }
    double p = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        p += w[k] * w[k] * overlap_sq[0];
        for (std::size_t l = k + 1; l < w.size(); ++l) p += 2.0 * w[k] * w[l] * overlap_sq[l - k];
    }
    return p;
}

DensityMatrix milburn_fock_series(const SystemParams& p, const FockDims& dims, double t,
                                  FockSeriesOptions opts) {
    const FockSeriesEngine engine(p, dims, opts);
    return engine.density(t);
}

PurityReport purity_scan(FockSeriesEngine& engine, const std::vector<double>& times, double slack) {
    check_times(times);
    PurityReport rep;
    rep.times = times;
    for (double t : times) rep.purity.push_back(engine.purity(t));
    for (std::size_t i = 1; i < rep.purity.size(); ++i) {
        const double inc = rep.purity[i] - rep.purity[i - 1];
        rep.max_increase = std::max(rep.max_increase, inc);
        if (inc > slack) ++rep.violations;
    }
    return rep;
}

// --------------------------------------------------------------- Lindblad

double dissipator_coefficient(double gamma, LindbladConvention conv) noexcept {
    return conv == LindbladConvention::half ? 0.5 / gamma : 1.0 / gamma;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const FockOperator& h, double gamma,
                           LindbladConvention conv) {
    if (!(rho.dims == h.dims) || rho.matrix.rows() != h.matrix.rows()) {
        throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    }
    const Eigen::MatrixXcd comm = h.matrix * rho.matrix - rho.matrix * h.matrix;
    const Eigen::MatrixXcd dcomm = h.matrix * comm - comm * h.matrix;
    return {rho.dims, cplx(0.0, -1.0) * comm - dissipator_coefficient(gamma, conv) * dcomm};
}

namespace {

struct SectorState {
    std::vector<Eigen::MatrixXcd> rho;        // excitation-diagonal blocks, eigenbasis
    std::vector<Eigen::MatrixXcd> generator;  // entrywise Liouvillian
    std::array<std::vector<Eigen::MatrixXd>, 3> number;  // n_j in the eigenbasis
};

PhotonNumbers sector_occupations(const SectorState& st, double& trace) {
    PhotonNumbers n;
    trace = 0.0;
    for (std::size_t s = 0; s < st.rho.size(); ++s) {
        // A_j is real symmetric, so tr(rho A) = sum rho_mn A_mn
        n.n1 += st.rho[s].cwiseProduct(st.number[0][s].cast<cplx>()).sum().real();
        n.n2 += st.rho[s].cwiseProduct(st.number[1][s].cast<cplx>()).sum().real();
        n.n3 += st.rho[s].cwiseProduct(st.number[2][s].cast<cplx>()).sum().real();
        trace += st.rho[s].trace().real();
    }
    return n;
}

void rk4_step(SectorState& st, double h) {
    for (std::size_t s = 0; s < st.rho.size(); ++s) {
        const Eigen::MatrixXcd& gen = st.generator[s];
        Eigen::MatrixXcd& r = st.rho[s];
        const Eigen::MatrixXcd k1 = gen.cwiseProduct(r);
        const Eigen::MatrixXcd k2 = gen.cwiseProduct(r + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = gen.cwiseProduct(r + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = gen.cwiseProduct(r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        r = (0.5 * (r + r.adjoint())).eval();
    }
}

TimeSeries run_lindblad(const SectorState& init, const SystemParams& p,
                        const std::vector<double>& times, double step) {
    SectorState st = init;
    TimeSeries out;
    out.engine = Engine::lindblad;
    out.params = p;
    double now = 0.0;
    for (double t : times) {
        const double span = t - now;
        if (span > 0.0) {
            const long n = std::max(1L, static_cast<long>(std::ceil(span / step - 1e-9)));
            const double h = span / static_cast<double>(n);
            for (long i = 0; i < n; ++i) rk4_step(st, h);
            now = t;
        }
        double trace = 0.0;
        out.push_back(t, sector_occupations(st, trace));
        out.trace.push_back(trace);
    }
    return out;
}

}  // namespace

LindbladResult integrate_lindblad(const SystemParams& p, const FockDims& dims,
                                  const std::vector<double>& times, LindbladOptions opts) {
    p.validate();
    check_times(times);
    if (!(opts.step > 0.0) || !std::isfinite(opts.step)) {
        throw std::invalid_argument("Lindblad step must be > 0");
    }
    const FockState psi0 = coherent_state(dims, 1, p.alpha, opts.leakage_budget);
    const SectorEigensystem eig(hamiltonian_fock(p, dims));
    const std::vector<Eigen::VectorXcd> coeffs = eig.to_eigen(psi0.amplitudes);
    const double kappa = dissipator_coefficient(p.gamma, opts.convention);

    SectorState st;
    for (std::size_t s = 0; s < eig.blocks().size(); ++s) {
        const auto& b = eig.blocks()[s];
        const Eigen::Index n = b.energies.size();
        st.rho.push_back(coeffs[s] * coeffs[s].adjoint());
        Eigen::MatrixXcd gen(n, n);
        for (Eigen::Index m = 0; m < n; ++m) {
            for (Eigen::Index q = 0; q < n; ++q) {
                const double w = b.energies(m) - b.energies(q);
                gen(m, q) = cplx(-kappa * w * w, -w);
            }
        }
        st.generator.push_back(std::move(gen));
        for (int j = 0; j < 3; ++j) {
            Eigen::VectorXd occ(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                occ(i) = dims.occupations(b.indices[static_cast<std::size_t>(i)])[static_cast<std::size_t>(j)];
            }
            st.number[static_cast<std::size_t>(j)].push_back(b.vectors.transpose() * occ.asDiagonal() *
                                                             b.vectors);
        }
    }

    LindbladResult res;
    res.series = run_lindblad(st, p, times, opts.step);
    if (opts.verify_halving) {
        const TimeSeries fine = run_lindblad(st, p, times, 0.5 * opts.step);
        for (std::size_t i = 0; i < fine.size(); ++i) {
            res.halving_deviation = std::max({res.halving_deviation,
                                              std::abs(fine.n1[i] - res.series.n1[i]),
                                              std::abs(fine.n2[i] - res.series.n2[i]),
                                              std::abs(fine.n3[i] - res.series.n3[i])});
        }
        if (res.halving_deviation > opts.halving_tol) {
            throw ConvergenceError("Lindblad step " + std::to_string(opts.step) +
                                   " not converged: halving moved outputs by " +
                                   std::to_string(res.halving_deviation));
        }
    }
    return res;
}

std::vector<double> uniform_grid(double t_max, int steps) {
    if (steps < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be > 0");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = t_max * i / (steps - 1);
    return g;
}

}  // namespace milburn
