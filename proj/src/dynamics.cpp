#include "decohere/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace decohere {

LindbladModel::LindbladModel(Observable hamiltonian, std::vector<ComplexMatrix> generators)
    : h_(std::move(hamiltonian)), ls_(std::move(generators)) {
    for (const auto& l : ls_)
        if (l.rows() != h_.dim() || l.cols() != h_.dim())
            throw DimensionError("Lindblad model: generator dimension differs from Hamiltonian");
}

LindbladModel::LindbladModel(Eigen::Index dim)
    : LindbladModel(Observable(ComplexMatrix::Zero(dim, dim)), {}) {}

Superoperator LindbladModel::generator_superoperator() const {
    const auto d = dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const ComplexMatrix& h = h_.matrix();
    ComplexMatrix g = -kI * (kron(id, h) - kron(ComplexMatrix(h.transpose()), id));
    for (const auto& l : ls_) {
        const ComplexMatrix ldl = l.adjoint() * l;
        g += kron(ComplexMatrix(l.conjugate()), l) - 0.5 * kron(id, ldl) -
             0.5 * kron(ComplexMatrix(ldl.transpose()), id);
    }
    return Superoperator(std::move(g), "lindbladian");
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim())
        throw DimensionError("Lindblad rhs: dimension mismatch");
    const ComplexMatrix& h = model.hamiltonian().matrix();
    ComplexMatrix out = -kI * (h * rho - rho * h);
    for (const auto& l : model.generators()) {
        const ComplexMatrix ldl = l.adjoint() * l;
        out -= 0.5 * (ldl * rho + rho * ldl);
        out += l * rho * l.adjoint();
    }
    return out;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho) {
    return lindblad_rhs(model, rho.matrix());
}

ComplexMatrix rk4_step(const LindbladModel& model, const ComplexMatrix& rho, double dt) {
    const ComplexMatrix k1 = lindblad_rhs(model, rho);
    const ComplexMatrix k2 = lindblad_rhs(model, ComplexMatrix(rho + 0.5 * dt * k1));
    const ComplexMatrix k3 = lindblad_rhs(model, ComplexMatrix(rho + 0.5 * dt * k2));
    const ComplexMatrix k4 = lindblad_rhs(model, ComplexMatrix(rho + dt * k3));
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

IntegrationResult integrate_traced(const LindbladModel& model, const DensityMatrix& rho0, double t,
                                   int steps, const IntegrationObserver& observer,
                                   const Tolerances& tol) {
    if (steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
    if (t < 0.0) throw std::invalid_argument("integrate: t must be >= 0");
    if (rho0.dim() != model.dim()) throw DimensionError("integrate: dimension mismatch");
    const double dt = t / steps;
    const Complex trace0 = rho0.matrix().trace();
    ComplexMatrix rho = rho0.matrix();
    double max_corr = 0.0;
    double min_eig = rho0.eigenvalues().minCoeff();
    if (observer) observer(0.0, rho);
    for (int s = 0; s < steps; ++s) {
        ComplexMatrix next = rk4_step(model, rho, dt);
        const double corr = max_abs(0.5 * (next - next.adjoint()));
        max_corr = std::max(max_corr, corr);
        if (corr > 1e-6) {
            std::ostringstream os;
            os << "integrate: symmetrization correction " << corr << " at step " << s
               << " exceeds 1e-6 (step too large?)";
            throw NumericalError(os.str());
        }
        rho = hermitian_part(next);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
        const double e = es.eigenvalues().minCoeff();
        min_eig = std::min(min_eig, e);
        if (e < -10.0 * tol.psd) {
            std::ostringstream os;
            os << "integrate: positivity breach (eigenvalue " << e << ") at step " << s;
            throw NumericalError(os.str());
        }
        if (observer) observer((s + 1) * dt, rho);
    }
    const double drift = std::abs(rho.trace() - trace0);
    return {DensityMatrix(std::move(rho), rho0.provenance()), max_corr, min_eig, drift};
}

DensityMatrix integrate(const LindbladModel& model, const DensityMatrix& rho0, double t, int steps) {
    return integrate_traced(model, rho0, t, steps).rho;
}

double step_halving_error(const LindbladModel& model, const DensityMatrix& rho0, double t, int steps) {
    const auto coarse = integrate(model, rho0, t, steps);
    const auto fine = integrate(model, rho0, t, 2 * steps);
    return max_abs(coarse.matrix() - fine.matrix());
}

ComplexMatrix choi_matrix(const Superoperator& map) {
    const auto d = map.dim();
    ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            ComplexMatrix e = ComplexMatrix::Zero(d, d);
            e(i, j) = 1.0;
            c += kron(map.apply(e), e);
        }
    }
    return c;
}

double choi_min_eigenvalue(const Superoperator& map) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(choi_matrix(map)),
                                                    Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

PropagatorReport analyze_map(const Superoperator& map) {
    const auto d = map.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const ComplexMatrix image = map.apply(id / static_cast<double>(d));
    const double trace_defect = std::abs(image.trace() - Complex(1.0));
    const bool creating = max_abs(image - id / static_cast<double>(d)) > 1e-10;
    return {map, choi_min_eigenvalue(map), trace_defect, creating};
}

PropagatorReport propagator(const LindbladModel& model, double t, int steps) {
    if (t < 0.0) throw std::invalid_argument("propagator: t must be >= 0");
    if (steps < 1) throw std::invalid_argument("propagator: steps must be >= 1");
    const auto d = model.dim();
    const double dt = t / steps;
    auto map = Superoperator::from_map(
        d,
        [&](const ComplexMatrix& e) {
            ComplexMatrix x = e;
            if (t > 0.0)
                for (int s = 0; s < steps; ++s) x = rk4_step(model, x, dt);
            return x;
        },
        "propagator");
    auto report = analyze_map(map);
    report.is_information_creating = information_gain(model);
    return report;
}

Superoperator transposition_map(Eigen::Index dim) {
    return Superoperator::from_map(
        dim, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); }, "transposition");
}

bool information_gain(const LindbladModel& model, const Tolerances& tol) {
    const auto d = model.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix on_unit = ComplexMatrix::Zero(d, d);
    ComplexMatrix commutators = ComplexMatrix::Zero(d, d);
    for (const auto& l : model.generators()) {
        const ComplexMatrix ldl = l.adjoint() * l;
        on_unit += ldl * id + id * ldl - 2.0 * l * id * l.adjoint();
        commutators += l * l.adjoint() - l.adjoint() * l;
    }
    const bool via_unit = 0.5 * max_abs(on_unit) > tol.rt;  // on_unit = -2 * commutators
    const bool via_commutator = max_abs(commutators) > tol.rt;
    if (via_unit != via_commutator)
        throw std::logic_error("information_gain: unit-matrix and commutator criteria disagree");
    return via_unit;
}

}  // namespace decohere
