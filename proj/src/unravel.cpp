#include "decohere/unravel.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "decohere/localization.hpp"

namespace decohere {

void HitProcess::validate() const {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("hit process: rate must be >= 0");
    if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("hit process: width must be > 0");
}

double HitProcess::decoherence_rate(double separation) const {
    return -rate * std::expm1(-separation * separation / (4.0 * width * width));
}

double HitProcess::lambda_eff() const { return rate / (4.0 * width * width); }

HitRegister HitRegister::on_grid(const PhaseSpaceGrid& grid) {
    return HitRegister{grid.positions(), grid.dx(), grid.length()};
}

double HitRegister::distance(double a, double b) const {
    const double d = a - b;
    return period > 0.0 ? d - period * std::floor(d / period + 0.5) : d;
}

HitEvent apply_hit(ComplexMatrix& psi, const HitRegister& reg, double width, Rng& rng, double time) {
    const auto n = reg.positions.size();
    if (psi.rows() != n) throw DimensionError("apply_hit: amplitude rows differ from register size");
    const RealVector marginal = psi.cwiseAbs2().rowwise().sum();
    const double total = marginal.sum();
    if (!(total > 0.0)) throw NumericalError("apply_hit: zero wave function");

    std::uniform_real_distribution<double> uniform(0.0, total);
    const double u = uniform(rng);
    Eigen::Index s = 0;
    double acc = marginal[0];
    while (acc <= u && s + 1 < n) acc += marginal[++s];
    std::normal_distribution<double> smear(0.0, width / std::sqrt(2.0));
    double center = reg.positions[s] + smear(rng);
    if (reg.period > 0.0) center = reg.distance(center, 0.0);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = reg.distance(reg.positions[i], center);
        psi.row(i) *= std::exp(-d * d / (2.0 * width * width));
    }
    const double norm2 = psi.squaredNorm() * reg.measure;
    if (!(norm2 > 1e-200)) {
        std::ostringstream os;
        os << "apply_hit: norm underflow after hit (norm^2 = " << norm2 << "); hit width " << width
           << " is pathological for this register";
        throw NumericalError(os.str());
    }
    psi /= std::sqrt(norm2);
    return HitEvent{time, center};
}

FreePropagator::FreePropagator(const PhaseSpaceGrid& grid, double mass) : trivial_(!std::isfinite(mass)) {
    if (!(mass > 0.0)) throw std::invalid_argument("free propagator: mass must be positive");
    if (trivial_) return;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(kinetic_matrix(grid, mass));
    modes_ = es.eigenvectors().cast<Complex>();
    energies_ = es.eigenvalues();
}

void FreePropagator::advance(ComplexVector& psi, double tau) const {
    if (trivial_ || tau == 0.0) return;
    ComplexVector c = modes_.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -energies_[k] * tau);
    psi = modes_ * c;
}

namespace {

ComplexVector normalized_on_grid(const ComplexVector& psi, const PhaseSpaceGrid& grid) {
    if (psi.size() != grid.size()) throw DimensionError("trajectory: wave function size differs from grid");
    const double n2 = psi.squaredNorm() * grid.dx();
    if (!(n2 > 0.0)) throw InvariantError("trajectory: zero wave function");
    if (std::abs(n2 - 1.0) > 1e-10) throw InvariantError("trajectory: wave function not normalized on the grid");
    return psi;
}

// Drives hits and free flight, calling sample(k) when time k * t / steps is reached.
template <class Sample>
void drive(const HitProcess& process, ComplexVector& psi, const PhaseSpaceGrid& grid, const FreePropagator& free,
           double t, int steps, std::vector<HitEvent>* hits, Sample&& sample) {
    process.validate();
    if (steps < 1) throw std::invalid_argument("trajectory: steps must be >= 1");
    if (t < 0.0) throw std::invalid_argument("trajectory: t must be >= 0");
    Rng rng(process.seed);
    std::exponential_distribution<double> wait(process.rate > 0.0 ? process.rate : 1.0);
    const HitRegister reg = HitRegister::on_grid(grid);
    const double inf = std::numeric_limits<double>::infinity();
    double now = 0.0;
    double next_hit = process.rate > 0.0 ? wait(rng) : inf;
    sample(0);
    for (int k = 1; k <= steps; ++k) {
        const double target = t * k / steps;
        while (next_hit <= target) {
            free.advance(psi, next_hit - now);
            now = next_hit;
            ComplexMatrix m = psi;
            const HitEvent ev = apply_hit(m, reg, process.width, rng, now);
            psi = m.col(0);
            if (hits) hits->push_back(ev);
            next_hit = now + wait(rng);
        }
        free.advance(psi, target - now);
        now = target;
        sample(k);
    }
}

}  // namespace

Trajectory run_trajectory(const HitProcess& process, const ComplexVector& psi0, const PhaseSpaceGrid& grid,
                          double mass, double t, int steps) {
    ComplexVector psi = normalized_on_grid(psi0, grid);
    const FreePropagator free(grid, mass);
    Trajectory traj;
    drive(process, psi, grid, free, t, steps, &traj.hits, [&](int k) {
        traj.times.push_back(t * k / steps);
        traj.states.push_back(psi);
    });
    return traj;
}

ComplexVector run_to(const HitProcess& process, const ComplexVector& psi0, const PhaseSpaceGrid& grid, double mass,
                     double t, std::vector<HitEvent>* hits) {
    ComplexVector psi = normalized_on_grid(psi0, grid);
    drive(process, psi, grid, FreePropagator(grid, mass), t, 1, hits, [](int) {});
    return psi;
}

GridState hit_master_evolve(const HitProcess& process, const GridState& state, double mass, double t, int steps) {
    process.validate();
    const auto& g = state.grid();
    const HitRegister reg = HitRegister::on_grid(g);
    RealMatrix rates(g.size(), g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        for (Eigen::Index j = 0; j < g.size(); ++j)
            rates(i, j) = process.decoherence_rate(reg.distance(g.x(i), g.x(j)));
    return evolve_with_rates(rates, mass, state, t, steps);
}

TrajectoryEnsembleReport ensemble_mean(const HitProcess& process, const ComplexVector& psi0,
                                       const PhaseSpaceGrid& grid, double mass, double t, int steps, int n_traj,
                                       std::uint64_t base_seed) {
    if (n_traj < 100) throw std::invalid_argument("ensemble_mean: n_traj must be >= 100");
    const auto start = std::chrono::steady_clock::now();
    const auto n = grid.size();
    const ComplexVector psi_start = normalized_on_grid(psi0, grid);
    const FreePropagator free(grid, mass);

    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    RealMatrix sum_re2 = RealMatrix::Zero(n, n);
    RealMatrix sum_im2 = RealMatrix::Zero(n, n);
    std::vector<std::uint64_t> seeds;
    seeds.reserve(n_traj);
    for (int k = 0; k < n_traj; ++k) {
        HitProcess p = process;
        p.seed = derive_seed(base_seed, static_cast<std::uint64_t>(k));
        seeds.push_back(p.seed);
        ComplexVector psi = psi_start;
        drive(p, psi, grid, free, t, 1, nullptr, [](int) {});
        const ComplexMatrix rho = psi * psi.adjoint();
        sum += rho;
        sum_re2 += rho.real().cwiseAbs2();
        sum_im2 += rho.imag().cwiseAbs2();
    }
    const double nt = n_traj;
    ComplexMatrix mean = sum / nt;
    auto stderr_of = [&](const RealMatrix& m2, const RealMatrix& m1) {
        RealMatrix var = (m2 / nt - m1.cwiseAbs2()).cwiseMax(0.0) * (nt / (nt - 1.0));
        return RealMatrix((var / nt).cwiseSqrt());
    };
    RealMatrix se_re = stderr_of(sum_re2, mean.real());
    RealMatrix se_im = stderr_of(sum_im2, mean.imag());

    const GridState initial = GridState::pure(psi_start, grid);
    const double bound = process.rate + (std::isfinite(mass) ? std::pow(std::numbers::pi / grid.dx(), 2) / (2.0 * mass) : 0.0);
    const int master_steps = std::max(steps, static_cast<int>(std::ceil(bound * t / 0.05)));
    GridState master = hit_master_evolve(process, initial, mass, t, master_steps);

    double max_dev = 0.0;
    double max_z = 0.0;
    const double significant = 1e-3 * master.rho().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex d = mean(i, j) - master.rho()(i, j);
            max_dev = std::max(max_dev, std::abs(d));
            // far tails are never sampled; their standard errors say nothing
            if (std::abs(master.rho()(i, j)) < significant) continue;
            if (se_re(i, j) > 0.0) max_z = std::max(max_z, std::abs(d.real()) / se_re(i, j));
            if (se_im(i, j) > 0.0) max_z = std::max(max_z, std::abs(d.imag()) / se_im(i, j));
        }

    TrajectoryEnsembleReport rep{n_traj,
                                 GridState(hermitian_part(mean), grid, Tolerances{1e-12, 1e-10, 1e-10, 1.0 / std::sqrt(nt), 1e-10}),
                                 std::move(se_re),
                                 std::move(se_im),
                                 std::move(master),
                                 max_dev,
                                 max_z,
                                 std::move(seeds),
                                 0.0};
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

CoherenceDecayReport coherence_decay(const HitProcess& process, const ComplexVector& psi0, const PhaseSpaceGrid& grid,
                                     double mass, double t, int steps, int n_traj, std::uint64_t base_seed,
                                     double split) {
    if (n_traj < 100) throw std::invalid_argument("coherence_decay: n_traj must be >= 100");
    const auto start = std::chrono::steady_clock::now();
    const auto n = grid.size();
    const ComplexVector psi_start = normalized_on_grid(psi0, grid);
    const FreePropagator free(grid, mass);
    RealVector left_mask(n);
    for (Eigen::Index i = 0; i < n; ++i) left_mask[i] = grid.x(i) < split ? 1.0 : 0.0;
    if (left_mask.sum() == 0.0 || left_mask.sum() == static_cast<double>(n))
        throw std::invalid_argument("coherence_decay: split leaves one side empty");
    const RealVector right_mask = RealVector::Ones(n) - left_mask;
    const double dx = grid.dx();

    const auto m = static_cast<std::size_t>(steps) + 1;
    std::vector<Complex> c_sum(m, Complex(0.0));
    std::vector<double> re2(m, 0.0), im2(m, 0.0), p_sum(m, 0.0), p2(m, 0.0);
    CoherenceDecayReport rep;
    rep.n_traj = n_traj;
    rep.split = split;
    rep.seeds.reserve(n_traj);
    for (int k = 0; k < n_traj; ++k) {
        HitProcess p = process;
        p.seed = derive_seed(base_seed, static_cast<std::uint64_t>(k));
        rep.seeds.push_back(p.seed);
        ComplexVector psi = psi_start;
        drive(p, psi, grid, free, t, steps, nullptr, [&](int s) {
            const Complex c = left_mask.cast<Complex>().dot(psi) * std::conj(right_mask.cast<Complex>().dot(psi)) * dx * dx;
            // dot() conjugates its first argument, which is real here
            const double pl = (psi.cwiseAbs2().array() * left_mask.array()).sum() * dx;
            c_sum[s] += c;
            re2[s] += c.real() * c.real();
            im2[s] += c.imag() * c.imag();
            p_sum[s] += pl;
            p2[s] += pl * pl;
        });
    }

    const double nt = n_traj;
    auto se = [&](double s2, double mean) { return std::sqrt(std::max(0.0, s2 / nt - mean * mean) / (nt - 1.0)); };
    auto z = [](double diff, double s) {
        if (s > 0.0) return std::abs(diff) / s;
        return std::abs(diff) > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    const double bound = process.rate + (std::isfinite(mass) ? std::pow(std::numbers::pi / dx, 2) / (2.0 * mass) : 0.0);
    const int sub = std::max(1, static_cast<int>(std::ceil(bound * t / steps / 0.05)));
    GridState master = GridState::pure(psi_start, grid);
    for (std::size_t s = 0; s < m; ++s) {
        if (s > 0) master = hit_master_evolve(process, master, mass, t / steps, sub);
        const ComplexMatrix& r = master.rho();
        CoherenceDecaySample smp;
        smp.t = t * static_cast<double>(s) / steps;
        smp.coherence_mean = c_sum[s] / nt;
        smp.coherence_stderr_re = se(re2[s], smp.coherence_mean.real());
        smp.coherence_stderr_im = se(im2[s], smp.coherence_mean.imag());
        smp.coherence_master = (left_mask.cast<Complex>().transpose() * r * right_mask.cast<Complex>()).value() * (dx * dx);
        smp.left_population_mean = p_sum[s] / nt;
        smp.left_population_stderr = se(p2[s], smp.left_population_mean);
        smp.left_population_master = (r.diagonal().real().array() * left_mask.array()).sum() * dx;
        const Complex dc = smp.coherence_mean - smp.coherence_master;
        smp.coherence_z = std::max(z(dc.real(), smp.coherence_stderr_re), z(dc.imag(), smp.coherence_stderr_im));
        smp.population_z = z(smp.left_population_mean - smp.left_population_master, smp.left_population_stderr);
        rep.max_coherence_z = std::max(rep.max_coherence_z, smp.coherence_z);
        rep.max_population_z = std::max(rep.max_population_z, smp.population_z);
        rep.samples.push_back(smp);
    }
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

void write_coherence_decay_csv(std::ostream& os, const CoherenceDecayReport& rep) {
    os << "t,coherence_re,coherence_im,coherence_se,master_re,master_im,left_population,left_population_se,"
          "left_population_master\n";
    const auto old = os.precision(17);
    for (const auto& s : rep.samples)
        os << s.t << ',' << s.coherence_mean.real() << ',' << s.coherence_mean.imag() << ','
           << std::hypot(s.coherence_stderr_re, s.coherence_stderr_im) << ',' << s.coherence_master.real() << ','
           << s.coherence_master.imag() << ',' << s.left_population_mean << ',' << s.left_population_stderr << ','
           << s.left_population_master << '\n';
    os.precision(old);
}

SubsystemDemoReport subsystem_inconsistency_demo(const StateVector& global, const HitProcess& process,
                                                 double separation, double t, int n_traj) {
    process.validate();
    if (global.dim() != 4) throw DimensionError("subsystem demo: global state must be two qubits");
    if (n_traj < 2) throw std::invalid_argument("subsystem demo: n_traj must be >= 2");
    if (t < 0.0) throw std::invalid_argument("subsystem demo: t must be >= 0");
    const HitRegister reg{RealVector{{-0.5 * separation, 0.5 * separation}}, 1.0, 0.0};

    // psi(s, b) with the A index on rows
    ComplexMatrix amps(2, 2);
    for (int s = 0; s < 2; ++s)
        for (int b = 0; b < 2; ++b) amps(s, b) = global[2 * s + b];
    const DensityMatrix rho_a(amps * amps.adjoint());
    const Ensemble members = eigen_ensemble(rho_a);

    auto unravel = [&](ComplexMatrix psi, std::uint64_t seed) {
        Rng rng(seed);
        if (process.rate > 0.0) {
            std::exponential_distribution<double> wait(process.rate);
            double now = wait(rng);
            while (now <= t) {
                apply_hit(psi, reg, process.width, rng, now);
                now += wait(rng);
            }
        }
        return ComplexMatrix(psi * psi.adjoint());
    };

    SubsystemDemoReport rep;
    rep.n_traj = n_traj;
    ComplexMatrix sum_c = ComplexMatrix::Zero(2, 2), sum_s = ComplexMatrix::Zero(2, 2);
    RealMatrix sq_c = RealMatrix::Zero(2, 2), sq_s = RealMatrix::Zero(2, 2);
    double pur_c = 0.0, pur_c2 = 0.0, pur_s = 0.0, pur_s2 = 0.0, ent_c = 0.0;
    for (int k = 0; k < n_traj; ++k) {
        const std::uint64_t seed = derive_seed(process.seed, static_cast<std::uint64_t>(k));
        const ComplexMatrix rc = unravel(amps, seed);

        // member draw on its own stream so the hit stream matches the composite run
        Rng pick(derive_seed(seed, 1));
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::size_t m = 0;
        if (members.size() > 1) {
            double acc = members.members()[0].probability;
            const double u = u01(pick);
            while (acc <= u && m + 1 < members.size()) acc += members.members()[++m].probability;
        }
        const ComplexMatrix rs = unravel(members.members()[m].state.amplitudes(), seed);

        sum_c += rc;
        sum_s += rs;
        sq_c += rc.cwiseAbs2();
        sq_s += rs.cwiseAbs2();
        const double pc = rc.squaredNorm(), ps = rs.squaredNorm();
        pur_c += pc;
        pur_c2 += pc * pc;
        pur_s += ps;
        pur_s2 += ps * ps;
        ent_c += von_neumann_entropy(hermitian_part(rc));
        rep.max_trajectory_difference = std::max(rep.max_trajectory_difference, max_abs(rc - rs));
    }
    const double nt = n_traj;
    rep.mean_composite = sum_c / nt;
    rep.mean_subsystem = sum_s / nt;
    auto se = [&](double m2, double m1) { return std::sqrt(std::max(0.0, m2 / nt - m1 * m1) / (nt - 1.0)); };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double a = std::abs(rep.mean_composite(i, j)), b = std::abs(rep.mean_subsystem(i, j));
            const double s = std::hypot(se(sq_c(i, j), a), se(sq_s(i, j), b));
            const double d = std::abs(rep.mean_composite(i, j) - rep.mean_subsystem(i, j));
            if (s > 0.0) rep.mean_z_score = std::max(rep.mean_z_score, d / s);
            else if (d > 1e-12) rep.mean_z_score = std::numeric_limits<double>::infinity();
        }
    rep.purity_composite = pur_c / nt;
    rep.purity_subsystem = pur_s / nt;
    rep.purity_stderr_composite = se(pur_c2, rep.purity_composite);
    rep.purity_stderr_subsystem = se(pur_s2, rep.purity_subsystem);
    const double sp = std::hypot(rep.purity_stderr_composite, rep.purity_stderr_subsystem);
    const double dp = std::abs(rep.purity_composite - rep.purity_subsystem);
    rep.purity_z_score = sp > 0.0 ? dp / sp : (dp > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.entropy_of_mean = von_neumann_entropy(hermitian_part(rep.mean_composite));
    rep.mean_entropy = ent_c / nt;
    return rep;
}

}  // namespace decohere
