#include "milburn/analytic.hpp"
#include "milburn/evolve.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace milburn;

namespace {

const SystemParams kFig1b{4.0, 0.5, 0.5, 10.0, {4.0, 0.0}};

// e^{-gt} [exp(gt e^{id/g}) + exp(gt e^{-id/g})] in complex arithmetic
double damping_complex(double delta, double gamma, double t) {
    using C = std::complex<double>;
    const C ph = std::exp(C(0.0, delta / gamma));
    const C v = std::exp(-gamma * t) * (std::exp(gamma * t * ph) + std::exp(gamma * t * std::conj(ph)));
    return v.real();
}

SystemParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(0.5, 10.0), c(-2.0, 2.0), gam(1.0, 200.0), a(-3.0, 3.0);
    return {w(rng), c(rng), c(rng), gam(rng), {a(rng), a(rng)}};
}

}  // namespace

TEST_CASE("rotated initial amplitudes") {
    SUBCASE("no mode-3 participation when g = 0") {
        const SystemParams p{4.0, 0.5, 0.0, 10.0, {2.0, 1.0}};
        const CoherentTriple b = rotated_initial_amplitudes(p, effective_frequencies(p));
        CHECK(std::abs(b.beta1 - p.alpha / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(b.beta2 - p.alpha / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(b.beta3) == 0.0);
    }
    SUBCASE("fig1b mode-3 amplitude") {
        const CoherentTriple b = rotated_initial_amplitudes(kFig1b, effective_frequencies(kFig1b));
        CHECK(b.beta3.real() == doctest::Approx(-1.632993161855452).epsilon(1e-13));
        // equals the rotation matrix applied to (alpha, 0, 0)
        const Eigen::Vector3d col = rotation_images(effective_frequencies(kFig1b).phi).col(0);
        CHECK(std::abs(b.beta1 - 4.0 * col(0)) < 1e-14);
        CHECK(std::abs(b.beta2 - 4.0 * col(1)) < 1e-14);
        CHECK(std::abs(b.beta3 - 4.0 * col(2)) < 1e-14);
    }
    SUBCASE("rotations preserve |alpha|^2") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 200; ++i) {
            const SystemParams p = random_params(rng);
            const CoherentTriple b = rotated_initial_amplitudes(p, effective_frequencies(p));
            REQUIRE(std::abs(std::norm(b.beta1) + std::norm(b.beta2) + std::norm(b.beta3) - p.alpha_sq()) <=
                    1e-12 * (1 + p.alpha_sq()));
        }
    }
}

TEST_CASE("damping factor") {
    CHECK(damping_factor(1.7, 10.0, 0.0) == 2.0);
    CHECK(damping_factor(0.0, 10.0, 123.0) == 2.0);
    CHECK(std::abs(damping_factor(1.5, 10.0, 1.0) - damping_complex(1.5, 10.0, 1.0)) <= 1e-13);
    for (double t : {0.1, 0.7, 3.0, 9.0}) {
        for (double d : {-2.1, -0.5, 0.3, 1.5, 4.0}) {
            CHECK(std::abs(damping_factor(d, 10.0, t) - damping_complex(d, 10.0, t)) <= 1e-12);
        }
    }
    SUBCASE("bounded by the decaying envelope") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> d(-5.0, 5.0), g(0.5, 500.0), t(0.0, 100.0);
        for (int i = 0; i < 2000; ++i) {
            const double dd = d(rng), gg = g(rng), tt = t(rng);
            const double f = damping_factor(dd, gg, tt);
            REQUIRE(std::abs(f) <= damping_envelope(dd, gg, tt) * (1 + 1e-15));
            REQUIRE(std::abs(f) <= 2.0);
        }
    }
    SUBCASE("no overflow at large gamma t") {
        const double f = damping_factor(1.0, 10.0, 1e5);
        CHECK(std::isfinite(f));
        CHECK(std::abs(f) < 1e-100);
    }
}

TEST_CASE("closed-form photon numbers") {
    const SpectralData s = effective_frequencies(kFig1b);
    SUBCASE("initial condition") {
        CHECK(mean_n1(kFig1b, s, 0.0) == doctest::Approx(16.0).epsilon(1e-15));
        CHECK(std::abs(mean_n2(kFig1b, s, 0.0)) < 1e-13);
        CHECK(mean_n3(kFig1b, s, 0.0) == 0.0);
    }
    SUBCASE("frozen values at t = 2 from a scipy expm Poisson sum") {
        const PhotonNumbers n = mean_photon_numbers(kFig1b, s, 2.0);
        CHECK(std::abs(n.n1 - 3.2743705016351727) < 1e-8);
        CHECK(std::abs(n.n2 - 6.362814749182417) < 1e-8);
        CHECK(std::abs(n.n3 - 6.362814749182415) < 1e-8);
    }
    SUBCASE("steady n3") {
        const double t_inf = asymptotic_time(kFig1b, s);
        CHECK(t_inf > 0.0);
        CHECK(std::abs(mean_n3(kFig1b, s, t_inf) - steady_n3(kFig1b, s)) < 1e-12);
        CHECK(steady_n3(kFig1b, s) == doctest::Approx(16.0 * std::pow(std::cos(s.phi) * std::sin(s.phi), 2)));
    }
    SUBCASE("printed constant equals 2 - 2 c^2 s^2") {
        for (double phi : {-1.1, 0.0, 0.3, 0.6154797086703874, 1.2}) {
            const double c2 = std::cos(phi) * std::cos(phi), s2 = std::sin(phi) * std::sin(phi);
            CHECK(std::abs(1.0 + 0.25 * (3.0 + std::cos(4 * phi)) - (2.0 - 2.0 * c2 * s2)) < 1e-15);
        }
    }
    SUBCASE("g = 0 keeps mode 3 empty and beats modes 1 and 2 at 2 lambda") {
        for (double lam : {0.5, -0.8}) {
            const SystemParams p{4.0, lam, 0.0, 10.0, {4.0, 0.0}};
            const SpectralData s0 = effective_frequencies(p);
            for (double t : {0.0, 0.5, 2.0, 11.0}) {
                CHECK(std::abs(mean_n3(p, s0, t)) < 1e-28);
                const double expect = 8.0 * (1.0 + 0.5 * damping_factor(2 * lam, p.gamma, t));
                CHECK(std::abs(mean_n1(p, s0, t) - expect) < 1e-12);
            }
        }
    }
    SUBCASE("degenerate g = lambda = 0 is constant") {
        const SystemParams p{4.0, 0.0, 0.0, 10.0, {4.0, 0.0}};
        const SpectralData s0 = effective_frequencies(p);
        for (double t : {0.0, 1.0, 30.0}) {
            const PhotonNumbers n = mean_photon_numbers(p, s0, t);
            CHECK(n.n1 == doctest::Approx(16.0));
            CHECK(std::abs(n.n2) < 1e-14);
            CHECK(std::abs(n.n3) < 1e-14);
        }
    }
}

TEST_CASE("conservation and bounds over parameter sweeps") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> tdist(0.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        const SystemParams p = random_params(rng);
        const SpectralData s = effective_frequencies(p);
        const double a2 = p.alpha_sq();
        for (int j = 0; j < 10; ++j) {
            const PhotonNumbers n = mean_photon_numbers(p, s, tdist(rng));
            REQUIRE(std::abs(n.total() - a2) <= 1e-12 * std::max(1.0, a2));
            for (double v : {n.n1, n.n2, n.n3}) {
                REQUIRE(v >= -1e-12 * std::max(1.0, a2));
                REQUIRE(v <= a2 * (1 + 1e-12) + 1e-14);
            }
        }
    }
}

TEST_CASE("per-k expectations") {
    const SpectralData s = effective_frequencies(kFig1b);
    const PhotonNumbers k0 = per_k_expectations(kFig1b, s, 0);
    CHECK(k0.n1 == doctest::Approx(16.0));
    CHECK(std::abs(k0.n2) < 1e-13);
    CHECK(std::abs(k0.n3) < 1e-13);

    const PhotonNumbers k3 = per_k_expectations(kFig1b, s, 3);
    CHECK(std::abs(k3.n1 - 15.292068283396814) < 1e-10);
    CHECK(std::abs(k3.n2 - 0.3539658583015931) < 1e-10);
    CHECK(std::abs(k3.n3 - 0.35396585830159333) < 1e-10);

    CoherentOracle oracle(kFig1b);
    for (long k : {1L, 3L, 17L, 250L}) {
        const PhotonNumbers a = per_k_expectations(kFig1b, s, k);
        const PhotonNumbers b = oracle.per_k(k);
        CHECK(std::abs(a.n1 - b.n1) < 1e-10);
        CHECK(std::abs(a.n2 - b.n2) < 1e-10);
        CHECK(std::abs(a.n3 - b.n3) < 1e-10);
        CHECK(std::abs(a.total() - 16.0) < 1e-12);
    }
}

TEST_CASE("Poisson resummation of per-k values reproduces the closed forms") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
        const SystemParams p = random_params(rng);
        const SpectralData s = effective_frequencies(p);
        for (double t : {0.1, 1.0, 5.0}) {
            const SeriesTruncation tr = poisson_kmax(p.gamma * t, 1e-13);
            const std::vector<double> w = poisson_weights(tr.mean, tr.k_max);
            PhotonNumbers sum;
            for (std::size_t k = 0; k < w.size(); ++k) {
                const PhotonNumbers nk = per_k_expectations(p, s, static_cast<long>(k));
                sum.n1 += w[k] * nk.n1;
                sum.n2 += w[k] * nk.n2;
                sum.n3 += w[k] * nk.n3;
            }
            const PhotonNumbers closed = mean_photon_numbers(p, s, t);
            const double tol = 1e-8 * std::max(1.0, p.alpha_sq());
            REQUIRE(std::abs(sum.n1 - closed.n1) <= tol);
            REQUIRE(std::abs(sum.n2 - closed.n2) <= tol);
            REQUIRE(std::abs(sum.n3 - closed.n3) <= tol);
        }
    }
}

TEST_CASE("large gamma approaches Schrodinger evolution") {
    SystemParams p = kFig1b;
    p.gamma = 1e6;
    const SpectralData s = effective_frequencies(p);
    for (double t = 0.0; t <= 10.0; t += 0.25) {
        const PhotonNumbers a = mean_photon_numbers(p, s, t);
        const PhotonNumbers u = schrodinger_occupations(p, t);
        REQUIRE(std::abs(a.n1 - u.n1) < 1e-4);
        REQUIRE(std::abs(a.n2 - u.n2) < 1e-4);
        REQUIRE(std::abs(a.n3 - u.n3) < 1e-4);
    }
}
