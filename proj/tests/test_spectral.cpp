#include "milburn/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace milburn;

namespace {

SystemParams params(double w, double l, double g) { return {w, l, g, 10.0, {4.0, 0.0}}; }

std::array<double, 3> sorted_eigs(const SystemParams& p) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(single_particle_matrix(p));
    return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
}

std::array<double, 3> sorted_effective(const SystemParams& p) {
    const SpectralData s = effective_frequencies(p);
    std::array<double, 3> v{s.omega_minus, s.Omega, s.Omega2};
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("mixing angle") {
    CHECK(mixing_angle(params(4, 0.5, 0)) == 0.0);
    CHECK(mixing_angle(params(4, 0, 1)) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    // frozen: 0.5 * atan(2 sqrt2 * 0.5 / 0.5)
    const double phi = mixing_angle(params(4, 0.5, 0.5));
    CHECK(phi == doctest::Approx(0.6154797086703874).epsilon(1e-14));
    CHECK(std::abs(residual_coupling(params(4, 0.5, 0.5), phi)) < 1e-12);
    // lambda = 0 still zeroes the 2-3 coupling
    CHECK(std::abs(residual_coupling(params(4, 0, 1), mixing_angle(params(4, 0, 1)))) < 1e-12);
}

TEST_CASE("effective frequencies") {
    SUBCASE("uncoupled limit") {
        const SpectralData s = effective_frequencies(params(4, 0.5, 0));
        CHECK(s.omega_minus == 3.5);
        CHECK(s.Omega == doctest::Approx(4.0).epsilon(1e-15));
        CHECK(s.Omega2 == doctest::Approx(4.5).epsilon(1e-15));
        CHECK(s.theta == doctest::Approx(std::numbers::pi / 4));
    }
    SUBCASE("fig1b parameters") {
        const SpectralData s = effective_frequencies(params(4, 0.5, 0.5));
        CHECK(std::abs(s.Omega - 3.5) < 1e-14);
        CHECK(std::abs(s.Omega2 - 5.0) < 1e-14);
        const auto e = sorted_eigs(params(4, 0.5, 0.5));
        CHECK(std::abs(e[0] - 3.5) < 1e-12);
        CHECK(std::abs(e[1] - 3.5) < 1e-12);
        CHECK(std::abs(e[2] - 5.0) < 1e-12);
    }
    SUBCASE("weak coupling matches eigensolver") {
        const auto mine = sorted_effective(params(4, 0.5, 0.1));
        const auto ref = sorted_eigs(params(4, 0.5, 0.1));
        for (int i = 0; i < 3; ++i) CHECK(std::abs(mine[i] - ref[i]) <= 1e-12);
    }
}

TEST_CASE("single particle matrix") {
    CHECK(single_particle_matrix(params(1, 0, 0)).isApprox(Eigen::Matrix3d::Identity(), 0.0));
    const Eigen::Matrix3d m = single_particle_matrix(params(4, 0.5, 0.3));
    CHECK(m(0, 1) == 0.5);
    CHECK(m(2, 0) == 0.3);
    CHECK(m(1, 2) == 0.3);
    CHECK((m - m.transpose()).norm() == 0.0);
}

TEST_CASE("rotation images") {
    SUBCASE("phi = 0 mixes only modes 1 and 2") {
        const Eigen::Matrix3d o = rotation_images(0.0);
        CHECK(o(2, 2) == 1.0);
        CHECK(o(0, 2) == 0.0);
        CHECK(o(2, 0) == 0.0);
        CHECK(std::abs(std::abs(o(0, 0)) - std::sqrt(0.5)) < 1e-15);
    }
    SUBCASE("orthogonal for any phi") {
        for (double phi : {-1.3, -0.2, 0.0, 0.4, 0.785, 1.5}) {
            const Eigen::Matrix3d o = rotation_images(phi);
            CHECK((o * o.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
    SUBCASE("reconstructs the single particle matrix") {
        const SystemParams p = params(4, 0.5, 0.5);
        const SpectralData s = effective_frequencies(p);
        const Eigen::Matrix3d o = rotation_images(s.phi);
        const Eigen::Matrix3d m = o.transpose() * rotated_frequencies(s).asDiagonal() * o;
        CHECK((m - single_particle_matrix(p)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("spectral properties over random parameters") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> w(0.5, 10.0);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    for (int draw = 0; draw < 1000; ++draw) {
        const SystemParams p = params(w(rng), c(rng), c(rng));
        const SpectralData s = effective_frequencies(p);
        const auto mine = sorted_effective(p);
        const auto ref = sorted_eigs(p);
        for (int i = 0; i < 3; ++i) REQUIRE(std::abs(mine[i] - ref[i]) <= 1e-10);
        REQUIRE(s.Omega <= s.Omega2);
        REQUIRE(std::abs(s.Omega + s.Omega2 - (2 * p.omega + p.lambda)) <= 1e-12 * (1 + p.omega));
        REQUIRE(std::abs(s.Omega * s.Omega2 - (p.omega * s.omega_plus - 2 * p.g * p.g)) <= 1e-10);
        REQUIRE(std::abs(residual_coupling(p, s.phi)) <= 1e-12 * (1 + p.omega));
        const Eigen::Matrix3d o = rotation_images(s.phi);
        const Eigen::Matrix3d m = o.transpose() * rotated_frequencies(s).asDiagonal() * o;
        REQUIRE((m - single_particle_matrix(p)).cwiseAbs().maxCoeff() <= 1e-12 * (1 + p.omega));
    }
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(params(4, 0, 0).validate());
    CHECK_THROWS_AS((SystemParams{0.0, 0, 0, 1, {}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((SystemParams{1.0, 0, 0, -1, {}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((SystemParams{1.0, NAN, 0, 1, {}}).validate(), std::invalid_argument);
}
