#include "doctest.h"

#include <cmath>

#include "decohere/bipartite.hpp"
#include "decohere/random.hpp"
#include "oracles.hpp"

using namespace decohere;

namespace {

StateVector ket(std::initializer_list<Complex> a) {
    ComplexVector v(static_cast<Eigen::Index>(a.size()));
    Eigen::Index i = 0;
    for (auto x : a) v[i++] = x;
    return StateVector::normalized(v);
}

BipartiteState bell() {
    ComplexMatrix c = ComplexMatrix::Zero(2, 2);
    c(0, 0) = c(1, 1) = 1.0 / std::sqrt(2.0);
    return BipartiteState(c);
}

BipartiteState random_bipartite(Eigen::Index m, Eigen::Index n, Rng& rng) {
    return BipartiteState::from_vector(random_state(m * n, rng).amplitudes(), {m, n});
}

}  // namespace

TEST_CASE("bipartite state validation and layout") {
    CHECK_THROWS_AS(BipartiteState(ComplexMatrix::Ones(2, 2)), InvariantError);
    const auto s = BipartiteState::product(ket({1, 0}), ket({0, 1, 0}));
    CHECK(s.dims().left == 2);
    CHECK(s.dims().right == 3);
    // |0> (x) |1> sits at composite index 0*3 + 1
    CHECK(std::abs(s.vector()[1] - 1.0) < 1e-15);
    CHECK_THROWS_AS(BipartiteState::from_vector(ComplexVector::Ones(6) / std::sqrt(6.0), {2, 2}), DimensionError);
}

TEST_CASE("partial trace examples") {
    SUBCASE("product state gives the factor projector") {
        const auto phi = ket({0.6, Complex(0, 0.8)});
        const auto big = ket({1, 2, 3});
        const auto r = partial_trace(BipartiteState::product(phi, big), Side::Left);
        CHECK(max_abs(r.matrix() - phi.projector()) < 1e-14);
        CHECK(r.provenance() == Provenance::Reduced);
        const auto r2 = partial_trace(BipartiteState::product(phi, big), Side::Right);
        CHECK(max_abs(r2.matrix() - big.projector()) < 1e-14);
    }
    SUBCASE("Bell state reduces to I/2") {
        CHECK(max_abs(partial_trace(bell(), Side::Left).matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);
        CHECK(max_abs(partial_trace(bell(), Side::Right).matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);
    }
    SUBCASE("diagonal coefficients") {
        ComplexMatrix c = ComplexMatrix::Zero(2, 2);
        c(0, 0) = 0.6;
        c(1, 1) = 0.8;
        const auto r = partial_trace(BipartiteState(c), Side::Left);
        // sum_n c_mn c*_m'n by hand
        CHECK(std::abs(r(0, 0) - 0.36) < 1e-15);
        CHECK(std::abs(r(1, 1) - 0.64) < 1e-15);
        CHECK(std::abs(r(0, 1)) < 1e-15);
    }
    SUBCASE("density matrix input agrees with the loop oracle") {
        Rng rng(3);
        for (int k = 0; k < 20; ++k) {
            const auto rho = random_density(12, rng);
            const auto a = partial_trace(rho, {3, 4}, Side::Left);
            const auto b = partial_trace(rho, {3, 4}, Side::Right);
            CHECK(max_abs(a.matrix() - oracle::trace_right(rho.matrix(), 3, 4)) < 1e-14);
            CHECK(max_abs(b.matrix() - oracle::trace_left(rho.matrix(), 3, 4)) < 1e-14);
        }
    }
    SUBCASE("factorization mismatch") {
        CHECK_THROWS_AS(partial_trace(DensityMatrix::maximally_mixed(6), {2, 2}, Side::Left), DimensionError);
    }
}

TEST_CASE("Schmidt decomposition") {
    SUBCASE("product state has rank one") {
        const auto s = schmidt_decompose(BipartiteState::product(ket({1, 1}), ket({1, 0, 2})));
        REQUIRE(s.rank() == 1);
        CHECK(std::abs(s.probs[0] - 1.0) < 1e-14);
    }
    SUBCASE("Bell state") {
        const auto s = schmidt_decompose(bell());
        REQUIRE(s.rank() == 2);
        CHECK(std::abs(s.probs[0] - 0.5) < 1e-14);
        CHECK(std::abs(s.probs[1] - 0.5) < 1e-14);
    }
    SUBCASE("probabilities equal both reduced spectra, 100 random states up to 4x5") {
        Rng rng(11);
        int checked = 0;
        for (Eigen::Index m = 1; m <= 4; ++m)
            for (Eigen::Index n = 1; n <= 5; ++n)
                for (int k = 0; k < 5; ++k) {
                    const auto st = random_bipartite(m, n, rng);
                    const auto s = schmidt_decompose(st);
                    const auto rho = st.density().matrix();
                    const auto ea = oracle::hermitian_eigenvalues(oracle::trace_right(rho, int(m), int(n)));
                    const auto eb = oracle::hermitian_eigenvalues(oracle::trace_left(rho, int(m), int(n)));
                    // oracles are ascending; Schmidt probs descending; zero tails are dropped
                    for (Eigen::Index k2 = 0; k2 < std::min(m, n); ++k2) {
                        const double p = k2 < s.rank() ? s.probs[k2] : 0.0;
                        CHECK(std::abs(p - ea[ea.size() - 1 - k2]) < 1e-10);
                        CHECK(std::abs(p - eb[eb.size() - 1 - k2]) < 1e-10);
                    }
                    CHECK(std::abs(s.probs.sum() - 1.0) < 1e-12);
                    for (Eigen::Index i = 1; i < s.rank(); ++i) CHECK(s.probs[i] <= s.probs[i - 1]);
                    CHECK((s.reconstruct() - st.vector()).cwiseAbs().maxCoeff() < 1e-10);
                    const auto r = s.rank();
                    CHECK(max_abs(s.left_basis.adjoint() * s.left_basis - ComplexMatrix::Identity(r, r)) < 1e-10);
                    CHECK(max_abs(s.right_basis.adjoint() * s.right_basis - ComplexMatrix::Identity(r, r)) < 1e-10);
                    ++checked;
                }
        CHECK(checked == 100);
    }
    SUBCASE("left basis diagonalizes the reduced matrix") {
        Rng rng(5);
        const auto st = random_bipartite(2, 3, rng);
        const auto s = schmidt_decompose(st);
        const auto ra = partial_trace(st, Side::Left).matrix();
        const ComplexMatrix d = s.left_basis.adjoint() * ra * s.left_basis;
        CHECK(max_abs(d - ComplexMatrix(s.probs.cast<Complex>().asDiagonal())) < 1e-10);
    }
}

TEST_CASE("premeasurement") {
    const std::vector<StateVector> pointers{StateVector::basis(3, 1), StateVector::basis(3, 2)};
    const auto ready = StateVector::basis(3, 0);

    SUBCASE("eigenstate is unchanged and stays a product") {
        const auto out = premeasure(StateVector::basis(2, 1), pointers, ready);
        const auto s = schmidt_decompose(out);
        CHECK(s.rank() == 1);
        CHECK(max_abs(partial_trace(out, Side::Left).matrix() - StateVector::basis(2, 1).projector()) < 1e-14);
        CHECK(max_abs(partial_trace(out, Side::Right).matrix() - pointers[1].projector()) < 1e-14);
    }
    SUBCASE("superposition becomes Bell type") {
        const auto out = premeasure(ket({1, 1}), pointers, ready);
        CHECK(max_abs(partial_trace(out, Side::Left).matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-14);
    }
    SUBCASE("0.6|0> + 0.8|1>") {
        const auto out = premeasure(ket({0.6, 0.8}), pointers, ready);
        const auto r = partial_trace(out, Side::Left);
        CHECK(std::abs(r(0, 0) - 0.36) < 1e-14);
        CHECK(std::abs(r(1, 1) - 0.64) < 1e-14);
        CHECK(std::abs(r(0, 1)) < 1e-14);
        const double s = -(0.36 * std::log(0.36) + 0.64 * std::log(0.64));
        CHECK(std::abs(von_neumann_entropy(r) - s) < 1e-12);
        CHECK(std::abs(s - 0.653) < 5e-4);
        const auto sd = schmidt_decompose(out);
        REQUIRE(sd.rank() == 2);
        CHECK(std::abs(sd.probs[0] - 0.64) < 1e-12);
        CHECK(std::abs(sd.probs[1] - 0.36) < 1e-12);
    }
    SUBCASE("random systems: diagonal reduced matrix with |c_n|^2, reversible") {
        Rng rng(21);
        std::vector<StateVector> ptr;
        const auto u = random_unitary(4, rng);
        for (int k = 0; k < 4; ++k) ptr.push_back(StateVector(u.col(k)));
        const auto rdy = random_state(4, rng);
        for (int k = 0; k < 10; ++k) {
            const auto sys = random_state(3, rng);
            const std::vector<StateVector> p3(ptr.begin(), ptr.begin() + 3);
            const auto out = premeasure(sys, p3, rdy);
            const auto r = partial_trace(out, Side::Left).matrix();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double expect = i == j ? std::norm(sys[i]) : 0.0;
                    CHECK(std::abs(r(i, j) - expect) < 1e-12);
                }
            const auto umat = premeasurement_unitary(p3, rdy);
            CHECK(max_abs(umat.adjoint() * umat - ComplexMatrix::Identity(12, 12)) < 1e-12);
            const ComplexVector back = umat.adjoint() * out.vector();
            CHECK((back - kron(sys.amplitudes(), rdy.amplitudes())).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    SUBCASE("measured basis and non-ideal final states") {
        PremeasureOptions opt;
        opt.measured_basis = ComplexMatrix(2, 2);
        opt.measured_basis << 1, 1, 1, -1;
        opt.measured_basis /= std::sqrt(2.0);
        const auto out = premeasure(ket({1, 0}), pointers, ready, opt);
        const auto r = partial_trace(out, Side::Left).matrix();
        // diagonal in the +/- basis with weights 1/2
        const ComplexMatrix d = opt.measured_basis.adjoint() * r * opt.measured_basis;
        CHECK(std::abs(d(0, 1)) < 1e-14);
        CHECK(std::abs(d(0, 0) - 0.5) < 1e-14);

        PremeasureOptions nonideal;
        nonideal.final_basis = ComplexMatrix(2, 2);
        nonideal.final_basis << 0, 1, 1, 0;
        const auto u = premeasurement_unitary(pointers, ready, nonideal);
        CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(6, 6)) < 1e-12);
    }
    SUBCASE("non-orthonormal pointers are rejected") {
        const std::vector<StateVector> bad{StateVector::basis(3, 1), ket({0, 1, 1})};
        CHECK_THROWS(premeasure(ket({1, 1}), bad, ready));
    }
}

TEST_CASE("classical projection") {
    SUBCASE("product state unchanged") {
        const auto st = BipartiteState::product(ket({1, 2}), ket({1, 0, 1}));
        CHECK(max_abs(classical_projection(st).matrix() - st.density().matrix()) < 1e-12);
    }
    SUBCASE("Bell state") {
        ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
        expect(0, 0) = expect(3, 3) = 0.5;
        const auto out = classical_projection(bell());
        CHECK(max_abs(out.matrix() - expect) < 1e-14);
        CHECK(std::abs(von_neumann_entropy(out) - std::log(2.0)) < 1e-12);
    }
    SUBCASE("random states: marginals kept, entropy is the Schmidt Shannon entropy, PPT") {
        Rng rng(8);
        for (int k = 0; k < 30; ++k) {
            const auto st = random_bipartite(2, 3, rng);
            const auto out = classical_projection(st);
            const auto rho = st.density().matrix();
            CHECK(max_abs(oracle::trace_right(out.matrix(), 2, 3) - oracle::trace_right(rho, 2, 3)) < 1e-10);
            CHECK(max_abs(oracle::trace_left(out.matrix(), 2, 3) - oracle::trace_left(rho, 2, 3)) < 1e-10);
            const auto ea = oracle::hermitian_eigenvalues(oracle::trace_right(rho, 2, 3));
            CHECK(std::abs(von_neumann_entropy(out) - oracle::shannon(ea)) < 1e-9);
            CHECK(von_neumann_entropy(out) >= -1e-10);
            CHECK_FALSE(is_entangled_ppt(out, {2, 3}).entangled);
        }
    }
}

TEST_CASE("PPT criterion") {
    SUBCASE("product density is separable") {
        Rng rng(4);
        const auto rho = tensor(random_density(2, rng), random_density(2, rng));
        const auto v = is_entangled_ppt(rho, {2, 2});
        CHECK_FALSE(v.entangled);
        CHECK(v.decisive);
    }
    SUBCASE("Bell projector is entangled with partial-transpose eigenvalue -1/2") {
        const auto v = is_entangled_ppt(bell().density(), {2, 2});
        CHECK(v.entangled);
        CHECK(std::abs(v.min_eigenvalue + 0.5) < 1e-12);
    }
    SUBCASE("partial transpose by hand") {
        Rng rng(2);
        const auto rho = random_density(6, rng).matrix();
        const auto pt = partial_transpose(rho, {2, 3});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 3; ++l) CHECK(pt(i * 3 + j, k * 3 + l) == rho(i * 3 + l, k * 3 + j));
    }
    SUBCASE("larger dims are not decisive") {
        CHECK_FALSE(is_entangled_ppt(DensityMatrix::maximally_mixed(9), {3, 3}).decisive);
        CHECK(is_entangled_ppt(DensityMatrix::maximally_mixed(6), {2, 3}).decisive);
        CHECK_THROWS_AS(is_entangled_ppt(DensityMatrix::maximally_mixed(6), {2, 2}), DimensionError);
    }
    SUBCASE("Werner states cross the threshold at 1/3") {
        const ComplexMatrix b = bell().density().matrix();
        for (double w : {0.2, 0.3, 0.34, 0.5, 0.9}) {
            const DensityMatrix rho(w * b + (1 - w) * 0.25 * ComplexMatrix::Identity(4, 4));
            CHECK(is_entangled_ppt(rho, {2, 2}).entangled == (w > 1.0 / 3.0));
        }
    }
}

TEST_CASE("reduced matrices of random global states stay valid") {
    Rng rng(13);
    for (int k = 0; k < 50; ++k) {
        const auto rho = random_density(8, rng, 1 + k % 8);
        CHECK_NOTHROW(partial_trace(rho, {2, 4}, Side::Left));
        CHECK_NOTHROW(partial_trace(rho, {4, 2}, Side::Right));
        CHECK(partial_trace(rho, {2, 4}, Side::Left).eigenvalues().minCoeff() > -1e-12);
    }
}
