#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "decohere/localization.hpp"
#include "decohere/wigner.hpp"

using namespace decohere;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("Gaussian ground state") {
    const PhaseSpaceGrid g(128, 24.0);
    const auto s = GridState::pure(gaussian_packet(g, 0.0, 1.0), g);
    const auto w = wigner_transform(s);
    REQUIRE(w.values.rows() == 128);
    double worst = 0.0;
    for (Eigen::Index l = 0; l < 128; ++l)
        for (Eigen::Index j = 0; j < 128; ++j) {
            const double p = g.p(l), q = g.x(j);
            worst = std::max(worst, std::abs(w.values(l, j) - std::exp(-q * q - p * p) / pi));
        }
    CHECK(worst < 1e-4);
    CHECK(std::abs(w.normalization() - 1.0) < 1e-6);
    CHECK(w.imag_residue < 1e-10);
    CHECK(std::abs(expectation_phase_space(w, [](double, double) { return 1.0; }) - 1.0) < 1e-6);
    CHECK(std::abs(expectation_phase_space(w, [](double, double q) { return q; })) < 1e-10);
    CHECK(std::abs(expectation_phase_space(w, [](double, double q) { return q * q; }) - 0.5) < 1e-4);
    CHECK(std::abs(expectation_phase_space(w, [](double p, double) { return p * p; }) - 0.5) < 1e-4);
}

TEST_CASE("boosted displaced packet") {
    const PhaseSpaceGrid g(128, 32.0);
    const double q0 = 2.0, k0 = 3 * g.dp(), width = 1.3;
    const auto w = wigner_transform(GridState::pure(gaussian_packet(g, q0, width, k0), g));
    double worst = 0.0;
    for (Eigen::Index l = 0; l < 128; ++l)
        for (Eigen::Index j = 0; j < 128; ++j) {
            const double p = g.p(l) - k0, q = g.x(j) - q0;
            const double expect = std::exp(-q * q / (width * width) - p * p * width * width) / pi;
            worst = std::max(worst, std::abs(w.values(l, j) - expect));
        }
    CHECK(worst < 1e-4);
    CHECK(std::abs(expectation_phase_space(w, [](double p, double) { return p; }) - k0) < 1e-8);
}

TEST_CASE("marginals reproduce both diagonals") {
    const PhaseSpaceGrid g(64, 32.0);
    for (const auto& s : {GridState::pure(cat_state(g, 8.0, 1.0), g),
                          GridState::mix(GridState::pure(gaussian_packet(g, -3.0, 0.9, 1.0), g),
                                         GridState::pure(gaussian_packet(g, 4.0, 1.4), g), 0.3)}) {
        const auto w = wigner_transform(s);
        CHECK((w.position_marginal() - s.position_density()).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((w.momentum_marginal() - momentum_density(s)).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("cat state negativity and its removal by dephasing") {
    const PhaseSpaceGrid g(128, 48.0);
    const double d = 8.0;
    const auto s0 = GridState::pure(cat_state(g, d, 1.0), g);
    const auto before = wigner_transform(s0);
    CHECK(before.min_value() < -0.1);
    const LocalizationParams p{std::numeric_limits<double>::infinity(), 1.0};
    const double t = 10.0 / (d * d);
    const auto after = wigner_transform(analytic_dephasing(p, s0, t));
    CHECK(after.min_value() >= -1e-3);
    CHECK(std::abs(after.normalization() - 1.0) < 1e-6);
}

TEST_CASE("linearity in the state") {
    const PhaseSpaceGrid g(32, 16.0);
    const auto a = GridState::pure(gaussian_packet(g, -2.0, 1.0), g);
    const auto b = GridState::pure(cat_state(g, 4.0, 0.8), g);
    const auto mixed = wigner_transform(GridState::mix(a, b, 0.35));
    const RealMatrix expect = 0.35 * wigner_transform(a).values + 0.65 * wigner_transform(b).values;
    CHECK((mixed.values - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("finite-interval correction") {
    const PhaseSpaceGrid g(32, 16.0);
    const auto w = wigner_transform(GridState::pure(cat_state(g, 4.0, 0.8), g));
    const auto c = finite_interval_correction(w);
    for (Eigen::Index l = 0; l < 32; ++l) CHECK(std::abs(c.values.row(l).mean()) < 1e-12);
    CHECK((finite_interval_correction(c).values - c.values).cwiseAbs().maxCoeff() < 1e-14);
    const auto flat = finite_interval_correction(wigner_transform(GridState::maximally_mixed(g)));
    CHECK(flat.values.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("export formats") {
    const PhaseSpaceGrid g(8, 6.0);
    const auto w = wigner_transform(GridState::pure(gaussian_packet(g, 0.5, 1.0), g));
    SUBCASE("csv") {
        std::ostringstream os;
        write_wigner_csv(os, w);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "p,q,W");
        std::getline(is, line);
        double p = 0, q = 0, v = 0;
        char c1 = 0, c2 = 0;
        std::istringstream(line) >> p >> c1 >> q >> c2 >> v;
        CHECK(p == doctest::Approx(g.p(0)));
        CHECK(q == doctest::Approx(g.x(0)));
        CHECK(v == doctest::Approx(w.values(0, 0)));
        int rows = 1;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == 64);
    }
    SUBCASE("binary") {
        std::stringstream ss;
        write_wigner_binary(ss, w);
        const std::string bytes = ss.str();
        REQUIRE(bytes.size() == 16 + 8 * 64);
        std::uint64_t n = 0;
        double len = 0, first = 0, second = 0;
        std::memcpy(&n, bytes.data(), 8);
        std::memcpy(&len, bytes.data() + 8, 8);
        std::memcpy(&first, bytes.data() + 16, 8);
        std::memcpy(&second, bytes.data() + 24, 8);
        CHECK(n == 8);
        CHECK(len == 6.0);
        CHECK(first == w.values(0, 0));
        CHECK(second == w.values(0, 1));  // row-major
        std::stringstream in(bytes);
        const auto back = read_wigner_binary(in);
        CHECK((back.values - w.values).cwiseAbs().maxCoeff() == 0.0);
        CHECK(back.grid == g);
    }
}
