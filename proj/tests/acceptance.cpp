// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Oracles are computed here from closed forms and plain Eigen calls.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "decohere/bipartite.hpp"
#include "decohere/bloch.hpp"
#include "decohere/dynamics.hpp"
#include "decohere/localization.hpp"
#include "decohere/random.hpp"
#include "decohere/scenarios.hpp"
#include "decohere/unravel.hpp"
#include "decohere/wigner.hpp"
#include "decohere/zwanzig.hpp"

using namespace decohere;

namespace {

struct Verdict {
    bool passed;
    std::string detail;
};

struct Criterion {
    std::string name;
    std::function<Verdict()> run;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RealVector spectrum(const ComplexMatrix& h) {
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
}

double entropy(const ComplexMatrix& rho) {
    double s = 0.0;
    for (double p : spectrum(rho))
        if (p > 1e-15) s -= p * std::log(p);
    return s;
}

struct InvariantTally {
    int calls = 0;
    double herm = 0.0, trace = 0.0, min_eig = 0.0;
    std::string worst_op;

    void record(const std::string& op, const ComplexMatrix& rho) {
        ++calls;
        const double h = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        const double t = std::abs(rho.trace() - 1.0);
        const double e = spectrum(rho).minCoeff();
        if (h > 1e-10 || t > 1e-8 || e < -1e-10) worst_op = op;
        herm = std::max(herm, h);
        trace = std::max(trace, t);
        min_eig = std::min(min_eig, e);
    }
    bool ok() const { return herm <= 1e-10 && trace <= 1e-8 && min_eig >= -1e-10; }
};

LindbladModel random_model(Eigen::Index d, Rng& rng, int n_ops) {
    std::vector<ComplexMatrix> ls;
    for (int k = 0; k < n_ops; ++k) ls.push_back(0.5 * random_ginibre(d, d, rng));
    return LindbladModel(Observable(random_hermitian(d, rng)), std::move(ls));
}

Verdict invariant_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20240601);
    std::uniform_int_distribution<int> dim(2, 4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    InvariantTally tally;
    const PhaseSpaceGrid grid(16, 24.0), fine(64, 32.0);
    for (int round = 0; round < 100; ++round) {
        const Eigen::Index a = dim(rng), b = dim(rng);
        const Dims dims{a, b};
        const DensityMatrix rho = random_density(a * b, rng);
        const BipartiteState psi = BipartiteState::from_vector(random_state(a * b, rng).amplitudes(), dims);

        tally.record("partial_trace", partial_trace(rho, dims, Side::Left).matrix());
        tally.record("partial_trace", partial_trace(psi, Side::Right).matrix());
        tally.record("tensor", tensor(partial_trace(rho, dims, Side::Left), partial_trace(rho, dims, Side::Right)).matrix());
        tally.record("project_sep", project_sep(rho, dims).matrix());
        tally.record("project_sub", project_sub(rho, dims).matrix());
        tally.record("project_semidiag",
                     project_semidiag(rho, SemidiagSpec::rank_one(random_unitary(a * b, rng))).matrix());
        tally.record("classical_projection", classical_projection(psi).matrix());

        // orthonormal pointer states need a system no larger than the apparatus
        const Eigen::Index sys = std::min(a, b);
        const ComplexMatrix frame = random_unitary(b, rng);
        std::vector<StateVector> pointers;
        for (Eigen::Index n = 0; n < sys; ++n) pointers.push_back(StateVector(frame.col(n)));
        tally.record("premeasure", premeasure(random_state(sys, rng), pointers, random_state(b, rng)).density().matrix());

        const LindbladModel model = random_model(a, rng, 2);
        const DensityMatrix r0 = random_density(a, rng);
        tally.record("integrate", integrate(model, r0, 0.5, 200).matrix());
        tally.record("propagator", propagator(model, 0.3, 100).superoperator.apply(r0.matrix()));
        tally.record("von_neumann_step", von_neumann_step(r0, Observable(random_hermitian(a, rng)), 0.7).matrix());
        tally.record("eigen_ensemble", density_from_ensemble(eigen_ensemble(r0)).matrix());

        const Vec3 gamma(u01(rng), u01(rng), u01(rng));
        const auto bp = BlochParams::make(Vec3(u01(rng), u01(rng), u01(rng)), gamma, Vec3::Zero());
        const auto traj = bloch_integrate(bp, Vec3(0.6, -0.3, 0.7), 5.0, 500);
        tally.record("bloch_integrate", rho_from_bloch(PolarizationVector(traj.final_state())).matrix());

        // grid operations: trace with dx weights, positivity of rho dx.
        // Linear distance is an exact Lindblad form on any grid; minimum image
        // runs where the state is resolved and spans less than L/2.
        const auto packet = GridState::pure(gaussian_packet(grid, 4.0 * u01(rng) - 2.0, 0.8 + u01(rng)), grid);
        const LocalizationParams lin{1.0 + u01(rng), 0.2 * u01(rng), DistanceConvention::Linear};
        tally.record("analytic_dephasing", analytic_dephasing(lin, packet, 0.5).rho() * grid.dx());
        tally.record("evolve", evolve(lin, packet, 0.3, min_stable_steps(lin, grid, 0.3, true, 0.02), true).rho() * grid.dx());
        tally.record("hit_master_evolve", hit_master_evolve(HitProcess{0.5, 1.0, 0}, packet, 2.0, 0.3, 40).rho() * grid.dx());
        tally.record("grid_mix", GridState::mix(packet, GridState::maximally_mixed(grid), u01(rng)).rho() * grid.dx());
        if (round % 4 == 0) {
            const auto wide = GridState::pure(gaussian_packet(fine, 2.0 * u01(rng) - 1.0, 0.8 + 0.7 * u01(rng)), fine);
            const LocalizationParams mi{1.0 + u01(rng), 0.1 * u01(rng)};
            tally.record("analytic_dephasing", analytic_dephasing(mi, wide, 1.0).rho() * fine.dx());
            tally.record("evolve", evolve(mi, wide, 0.1, min_stable_steps(mi, fine, 0.1, true, 0.02), true).rho() * fine.dx());
        }
    }
    const double elapsed = seconds_since(t0);
    const bool ok = tally.ok() && tally.calls >= 1000 && elapsed < 60.0;
    return {ok, std::to_string(tally.calls) + " calls, max herm " + fmt(tally.herm) + ", max |Tr-1| " + fmt(tally.trace) +
                    ", min eig " + fmt(tally.min_eig) + ", " + fmt(elapsed) + " s" +
                    (tally.worst_op.empty() ? "" : ", violated by " + tally.worst_op)};
}

Verdict schmidt_consistency() {
    Rng rng(7);
    double worst = 0.0;
    int n = 0;
    for (Eigen::Index a = 1; a <= 4; ++a)
        for (Eigen::Index b = 1; b <= 5; ++b)
            for (int k = 0; k < 5; ++k, ++n) {
                const BipartiteState psi = BipartiteState::from_vector(random_state(a * b, rng).amplitudes(), {a, b});
                const auto sd = schmidt_decompose(psi);
                const ComplexMatrix rho = psi.vector() * psi.vector().adjoint();
                // reduced states by explicit index sums
                ComplexMatrix ra = ComplexMatrix::Zero(a, a), rb = ComplexMatrix::Zero(b, b);
                for (Eigen::Index i = 0; i < a; ++i)
                    for (Eigen::Index i2 = 0; i2 < a; ++i2)
                        for (Eigen::Index j = 0; j < b; ++j) ra(i, i2) += rho(i * b + j, i2 * b + j);
                for (Eigen::Index j = 0; j < b; ++j)
                    for (Eigen::Index j2 = 0; j2 < b; ++j2)
                        for (Eigen::Index i = 0; i < a; ++i) rb(j, j2) += rho(i * b + j, i * b + j2);
                for (const ComplexMatrix* r : {&ra, &rb}) {
                    RealVector ev = spectrum(*r).reverse();
                    for (Eigen::Index m = 0; m < ev.size(); ++m) {
                        const double p = m < sd.rank() ? sd.probs[m] : 0.0;
                        worst = std::max(worst, std::abs(ev[m] - p));
                    }
                }
            }
    return {worst <= 1e-10 && n >= 100, std::to_string(n) + " states, max |p_k - eig| = " + fmt(worst)};
}

Verdict entropy_monotonicity() {
    Rng rng(11);
    double sep = 1e300, semi = 1e300, cls = 1e300;
    std::uniform_int_distribution<int> dim(2, 3);
    for (int k = 0; k < 100; ++k) {
        const Dims dims{dim(rng), dim(rng) + 1};
        const DensityMatrix rho = random_density(dims.total(), rng, 1 + k % dims.total());
        const double s = entropy(rho.matrix());
        sep = std::min(sep, entropy(project_sep(rho, dims).matrix()) - s);
        const auto spec = SemidiagSpec::rank_one(random_unitary(dims.total(), rng));
        semi = std::min(semi, entropy(project_semidiag(rho, spec).matrix()) - s);
        const BipartiteState psi = BipartiteState::from_vector(random_state(dims.total(), rng).amplitudes(), dims);
        cls = std::min(cls, entropy(classical_projection(psi).matrix()) - entropy(psi.density().matrix()));
    }
    const bool ok = sep >= -1e-10 && semi >= -1e-10 && cls >= -1e-10;
    return {ok, "min S(P rho) - S(rho): sep " + fmt(sep) + ", semidiag " + fmt(semi) + ", classical " + fmt(cls)};
}

Verdict localization_closed_form() {
    const PhaseSpaceGrid g(256, 40.0);
    const double lambda = 0.1, t = 0.5;
    const LocalizationParams p{std::numeric_limits<double>::infinity(), lambda};
    const auto s0 = GridState::pure(cat_state(g, 8.0, 1.0), g);
    const auto s = evolve(p, s0, t, min_stable_steps(p, g, t, false, 0.02), false);
    const double floor = 1e-12 * s0.rho().cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 256; ++i)
        for (Eigen::Index j = 0; j < 256; ++j) {
            if (std::abs(s0.rho()(i, j)) <= floor) continue;
            const double d = g.x(i) - g.x(j);
            const Complex exact = s0.rho()(i, j) * std::exp(-lambda * d * d * t);
            worst = std::max(worst, std::abs(s.rho()(i, j) - exact) / std::abs(exact));
        }

    // Lindblad form with L = sqrt(2 lambda) x on 16 points
    const PhaseSpaceGrid g16(16, 8.0);
    const LocalizationParams p16{0.8, 0.35, DistanceConvention::Linear};
    const auto st = GridState::pure(cat_state(g16, 3.0, 0.7), g16);
    const ComplexMatrix x = g16.positions().cast<Complex>().asDiagonal();
    const ComplexMatrix h = kinetic_matrix(g16, 0.8).cast<Complex>();
    const LindbladModel model(Observable(h), {std::sqrt(2.0 * p16.lambda) * x});
    const double rhs_dev = (lindblad_rhs(model, st.rho()) - eq14_rhs(p16, st)).cwiseAbs().maxCoeff();
    return {worst <= 1e-6 && rhs_dev <= 1e-10,
            "256-point max relative error " + fmt(worst) + ", 16-point Lindblad rhs deviation " + fmt(rhs_dev)};
}

Verdict bloch_boundary() {
    Rng rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), g01(0.0, 1.0);
    double max_norm = 0.0;
    int accepted = 0;
    for (int tries = 0; tries < 1000 && accepted < 20; ++tries) {
        Vec3 pi0(u(rng), u(rng), u(rng));
        pi0 *= 0.9 * g01(rng) / std::max(pi0.norm(), 1e-12);
        const Mat3 frame = Eigen::AngleAxisd(3.0 * u(rng), Vec3(u(rng), u(rng), u(rng)).normalized()).toRotationMatrix();
        const auto params = BlochParams::make(Vec3(u(rng), u(rng), u(rng)), Vec3(g01(rng), g01(rng), g01(rng)), pi0, frame);
        if (bloch_choi_min_eigenvalue(params) < -1e-8) continue;
        ++accepted;
        Vec3 start(u(rng), u(rng), u(rng));
        start /= std::max(1.0, start.norm());
        const auto traj = bloch_integrate(params, start, 50.0, 5000);
        for (const auto& s : traj.states) max_norm = std::max(max_norm, s.norm());
    }
    const auto bad = BlochParams::unchecked(Vec3::Zero(), Vec3(-0.1, 0.0, 0.0), Vec3::Zero());
    const auto traj = bloch_integrate(bad, Vec3(0.5, 0.0, 0.0), 50.0, 5000);
    // |pi| = 0.5 exp(0.1 t) crosses 1 at 10 ln 2
    const bool flagged = traj.first_violation_time.has_value();
    const double tv = flagged ? *traj.first_violation_time : NAN;
    const bool ok = accepted == 20 && max_norm <= 1.0 + 1e-8 && flagged && std::abs(tv - 10.0 * std::log(2.0)) < 0.02;
    return {ok, std::to_string(accepted) + " admissible runs, max |pi| = " + fmt(max_norm) +
                    ", gamma = (-0.1, 0, 0) first violation at t = " + fmt(tv)};
}

ComplexMatrix choi_of(const Superoperator& map) {
    const Eigen::Index d = map.dim();
    ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            ComplexMatrix e = ComplexMatrix::Zero(d, d);
            e(i, j) = 1.0;
            const ComplexMatrix img = map.apply(e);
            for (Eigen::Index k = 0; k < d; ++k)
                for (Eigen::Index l = 0; l < d; ++l) c(k * d + i, l * d + j) += img(k, l);
        }
    return c;
}

Verdict complete_positivity() {
    Rng rng(5);
    double worst = 1e300;
    for (int k = 0; k < 20; ++k) {
        const Eigen::Index d = 2 + k % 3;
        const auto rep = propagator(random_model(d, rng, 1 + k % 3), 0.2 + 0.1 * (k % 5), 200);
        worst = std::min(worst, spectrum(choi_of(rep.superoperator)).minCoeff());
    }
    const double transposition = spectrum(choi_of(transposition_map(2))).minCoeff();
    return {worst >= -1e-8 && transposition < -0.5,
            "min Choi eigenvalue over 20 propagators " + fmt(worst) + ", transposition " + fmt(transposition)};
}

Verdict semigroup() {
    Rng rng(13);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const Eigen::Index d = 2 + k % 3;
        const auto model = random_model(d, rng, 2);
        const double t1 = 0.3, t2 = 0.45;
        const auto a = propagator(model, t1, 300).superoperator;
        const auto b = propagator(model, t2, 450).superoperator;
        const auto ab = propagator(model, t1 + t2, 750).superoperator;
        worst = std::max(worst, (a.then(b).matrix() - ab.matrix()).cwiseAbs().maxCoeff());
        worst = std::max(worst, (b.matrix() * a.matrix() - ab.matrix()).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-6, "max |Phi(t1) Phi(t2) - Phi(t1 + t2)| = " + fmt(worst)};
}

Verdict exponential_decay() {
    double worst = 0.0;
    for (double gamma : {0.5, 1.0, 3.0}) {
        // |1> excited, sigma_- = |0><1|
        ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
        lower(0, 1) = 1.0;
        const LindbladModel model(Observable(ComplexMatrix::Zero(2, 2)), {std::sqrt(gamma) * lower});
        const DensityMatrix excited = DensityMatrix::pure(StateVector::basis(2, 1));
        const auto rho = integrate(model, excited, 1.0 / gamma, 1000);
        worst = std::max(worst, std::abs(rho(1, 1).real() - std::exp(-1.0)));
    }
    ScenarioConfig cfg = default_config(Scenario::ExponentialDecay);
    cfg.parameters = {{"Gamma", 2.0}, {"t_max", 5.0}, {"n_points", 51}, {"steps_per_point", 100}};
    const auto r = run_scenario(cfg);
    const double scenario_dev = std::abs(r.report["p_excited_at_lifetime"].get<double>() - std::exp(-1.0));
    return {worst <= 1e-6 && scenario_dev <= 1e-6 && r.all_passed(),
            "max |p_excited(1/Gamma) - e^-1| = " + fmt(worst) + " (direct), " + fmt(scenario_dev) + " (scenario)"};
}

Verdict zeno() {
    auto fitted = [](std::vector<double> ladder) {
        ScenarioConfig cfg = load_config(Scenario::QuantumZeno, {{"parameters", {{"omega", 1.0}, {"monitor_rates", ladder}}}});
        const auto r = run_scenario(cfg);
        std::vector<double> rates;
        for (const auto& row : r.report["rates"]) rates.push_back(row["fitted_rate"].get<double>());
        return rates;
    };
    const auto low = fitted({4.0, 8.0, 16.0, 32.0});
    bool decreasing = true;
    for (std::size_t i = 1; i < low.size(); ++i) decreasing = decreasing && low[i] < low[i - 1];
    // top decade kappa in [10, 100] Omega; strong monitoring gives 2 Omega^2 / kappa
    const auto top = fitted({12.5, 25.0, 50.0, 100.0});
    double worst_ratio = 0.0, asym = 0.0;
    std::string ratios;
    for (std::size_t i = 1; i < top.size(); ++i) {
        const double r = top[i] / top[i - 1];
        worst_ratio = std::max(worst_ratio, std::abs(r - 0.5));
        ratios += (i > 1 ? ", " : "") + fmt(r);
    }
    asym = std::abs(top.back() * 100.0 / 2.0 - 1.0);
    return {decreasing && worst_ratio <= 0.1 && asym < 1e-3,
            std::string("ladder 4..32 Omega ") + (decreasing ? "strictly decreasing" : "NOT decreasing") +
                "; top-decade ratios " + ratios + "; kappa = 100: rate / (2 Omega^2 / kappa) - 1 = " + fmt(asym)};
}

Verdict unravelling() {
    const PhaseSpaceGrid g(64, 32.0);
    const HitProcess process{0.5, 0.7, 0};
    const auto rep = coherence_decay(process, cat_state(g, 6.0, 1.0), g, 5.0, 2.0, 8, 10000, 42);
    const auto& first = rep.samples.front();
    const auto& last = rep.samples.back();
    const double decay = std::abs(last.coherence_master) / std::abs(first.coherence_master);
    const bool ok = rep.n_traj == 10000 && rep.max_coherence_z <= 3.0 && rep.max_population_z <= 3.0 && decay < 0.5 &&
                    rep.elapsed_seconds < 600.0;
    return {ok, "10^4 trajectories, cross-lobe coherence max z " + fmt(rep.max_coherence_z) + " over " +
                    std::to_string(rep.samples.size()) + " times (decays to " + fmt(decay) +
                    " of its initial value), left population max z " + fmt(rep.max_population_z) + ", " +
                    fmt(rep.elapsed_seconds) + " s"};
}

Verdict chirality_parity() {
    auto difference = [](double p) {
        ScenarioConfig cfg = load_config(Scenario::ChiralMolecule, {{"parameters", {{"p", p}, {"t_max", 0.5}, {"n_points", 2}}}});
        return run_scenario(cfg).report["difference_max_abs"].get<double>();
    };
    const double at_half = difference(0.5);
    double smallest_far = 1e300;
    for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.05) {
        if (std::abs(p - 0.5) < 0.05 - 1e-12) continue;
        smallest_far = std::min(smallest_far, difference(std::min(p, 1.0)));
    }
    return {at_half == 0.0 && smallest_far > 0.01,
            "||rho_chir - rho_par|| at p = 1/2: " + fmt(at_half) + "; min over |p - 1/2| >= 0.05: " + fmt(smallest_far)};
}

Verdict charge_toy() {
    const double c0 = 0.6, c1 = 0.8;
    double worst = 0.0;
    for (double s : {0.0, 0.3, 1.0}) {
        ScenarioConfig cfg = load_config(Scenario::ChargeSuperselection, {{"parameters", {{"amplitudes", {c0, c1}}, {"far_overlap", s}}}});
        const auto r = run_scenario(cfg);
        const ComplexMatrix block = matrix_from_json(r.report["dressed_block"]);
        worst = std::max(worst, std::abs(std::abs(block(0, 1)) - c0 * c1 * s));
        worst = std::max(worst, std::abs(std::abs(block(1, 0)) - c0 * c1 * s));
    }
    return {worst <= 1e-12, "max | |rho_01| - |c0 c1*| s | over s in {0, 0.3, 1}: " + fmt(worst)};
}

Verdict wigner_checks() {
    constexpr double pi = 3.14159265358979323846;
    const PhaseSpaceGrid g(128, 24.0);
    const auto w = wigner_transform(GridState::pure(gaussian_packet(g, 0.0, 1.0), g));
    double gauss = 0.0;
    for (Eigen::Index l = 0; l < 128; ++l)
        for (Eigen::Index j = 0; j < 128; ++j) {
            const double p = g.p(l), q = g.x(j);
            gauss = std::max(gauss, std::abs(w.values(l, j) - std::exp(-q * q - p * p) / pi));
        }

    const PhaseSpaceGrid gc(128, 48.0);
    const double d = 8.0, lambda = 1.0, t = 10.0 / (lambda * d * d);
    const auto cat = GridState::pure(cat_state(gc, d, 1.0), gc);
    const auto wc = wigner_transform(cat);
    // momentum marginal from an explicit DFT of the wave function
    const ComplexVector psi = cat_state(gc, d, 1.0);
    RealVector mom(128);
    for (Eigen::Index l = 0; l < 128; ++l) {
        Complex a = 0.0;
        for (Eigen::Index j = 0; j < 128; ++j) a += std::polar(1.0, -gc.p(l) * gc.x(j)) * psi[j];
        mom[l] = std::norm(a) * gc.dx() * gc.dx() / (2.0 * pi);
    }
    RealVector pos(128);
    for (Eigen::Index j = 0; j < 128; ++j) pos[j] = std::norm(psi[j]);
    const double marg = std::max((wc.position_marginal() - pos).cwiseAbs().maxCoeff(),
                                 (wc.momentum_marginal() - mom).cwiseAbs().maxCoeff());

    // kinetic-free dephasing in closed form
    ComplexMatrix rho = cat.rho();
    for (Eigen::Index i = 0; i < 128; ++i)
        for (Eigen::Index j = 0; j < 128; ++j) {
            const double s = gc.min_image(gc.x(i) - gc.x(j));
            rho(i, j) *= std::exp(-lambda * s * s * t);
        }
    const auto after = wigner_transform(GridState(rho, gc));
    const bool ok = gauss <= 1e-4 && marg <= 1e-6 && wc.min_value() < 0.0 && std::abs(after.min_value()) <= 1e-3;
    return {ok, "Gaussian max error " + fmt(gauss) + ", marginals " + fmt(marg) + ", cat min W " + fmt(wc.min_value()) +
                    " before, " + fmt(after.min_value()) + " after lambda t d^2 = 10"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"invariant suite", invariant_suite},
        {"Schmidt vs partial trace", schmidt_consistency},
        {"projection entropy monotonicity", entropy_monotonicity},
        {"localization closed form and Lindblad form", localization_closed_form},
        {"Bloch positivity boundary", bloch_boundary},
        {"complete positivity", complete_positivity},
        {"Lindblad semigroup composition", semigroup},
        {"exponential decay", exponential_decay},
        {"Zeno suppression", zeno},
        {"unravelling equivalence", unravelling},
        {"chirality/parity identity", chirality_parity},
        {"charge toy", charge_toy},
        {"Wigner checks", wigner_checks},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v{false, ""};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            v = criteria[i].run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.passed) ++failed;
        std::cout << (v.passed ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].name << ": " << v.detail
                  << " (" << fmt(seconds_since(t0)) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
