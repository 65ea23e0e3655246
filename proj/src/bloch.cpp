#include "decohere/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "decohere/dynamics.hpp"

namespace decohere {

namespace {

const std::array<ComplexMatrix, 3>& paulis() {
    static const std::array<ComplexMatrix, 3> p{pauli_x(), pauli_y(), pauli_z()};
    return p;
}

Mat3 cross_matrix(const Vec3& w) {
    Mat3 m;
    m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
    return m;
}

void require_frame(const Mat3& basis) {
    if ((basis.transpose() * basis - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvariantError("Bloch parameters: basis vectors e_i are not orthonormal");
}

// Linear part of the flow: d pi/dt = M pi + c
Mat3 flow_matrix(const BlochParams& p) {
    Mat3 damping = Mat3::Zero();
    for (int i = 0; i < 3; ++i) damping += p.gamma[i] * p.basis.col(i) * p.basis.col(i).transpose();
    return cross_matrix(p.omega) - damping;
}

}  // namespace

PolarizationVector::PolarizationVector(const Vec3& pi, const Tolerances& tol) : pi_(pi) {
    if (!pi.allFinite() || pi.norm() > 1.0 + tol.rt) {
        std::ostringstream os;
        os << "polarization vector: |pi| = " << pi.norm() << " exceeds 1 (unphysical)";
        throw InvariantError(os.str());
    }
}

PolarizationVector PolarizationVector::unchecked(const Vec3& pi) {
    PolarizationVector v;
    v.pi_ = pi;
    return v;
}

DensityMatrix rho_from_bloch(const PolarizationVector& pi) {
    ComplexMatrix rho = 0.5 * ComplexMatrix::Identity(2, 2);
    for (int i = 0; i < 3; ++i) rho += 0.5 * pi.vector()[i] * paulis()[i];
    return DensityMatrix(std::move(rho));
}

PolarizationVector bloch_from_rho(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw DimensionError("bloch_from_rho: density matrix must be 2 x 2");
    Vec3 pi;
    for (int i = 0; i < 3; ++i) pi[i] = (paulis()[i] * rho.matrix()).trace().real();
    return PolarizationVector(pi);
}

bool AffineMapSpec::is_idempotent(double tol) const {
    return (a * a - a).cwiseAbs().maxCoeff() <= tol && (a * pi0).norm() <= tol;
}

bool AffineMapSpec::is_hermitian(double tol) const {
    return pi0.norm() <= tol && (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Superoperator AffineMapSpec::superoperator() const {
    return Superoperator::from_map(
        2,
        [this](const ComplexMatrix& x) {
            // x = x0 1 + v . sigma  ->  x0 (1 + pi0 . sigma) + (A v) . sigma
            const Complex x0 = 0.5 * x.trace();
            Eigen::Vector3cd v;
            for (int i = 0; i < 3; ++i) v[i] = 0.5 * (paulis()[i] * x).trace();
            const Eigen::Vector3cd av = a.cast<Complex>() * v;
            ComplexMatrix out = x0 * ComplexMatrix::Identity(2, 2);
            for (int i = 0; i < 3; ++i) out += (x0 * pi0[i] + av[i]) * paulis()[i];
            return out;
        },
        "affine");
}

PolarizationVector apply_affine_map(const AffineMapSpec& spec, const PolarizationVector& pi) {
    return PolarizationVector::unchecked(spec.a * pi.vector() + spec.pi0);
}

// ---------------------------------------------------------------------------

BlochParams BlochParams::unchecked(const Vec3& omega, const Vec3& gamma, const Vec3& pi0,
                                   const Mat3& basis) {
    require_frame(basis);
    return BlochParams{omega, gamma, pi0, basis};
}

BlochParams BlochParams::make(const Vec3& omega, const Vec3& gamma, const Vec3& pi0, const Mat3& basis) {
    auto p = unchecked(omega, gamma, pi0, basis);
    require_admissible(p);
    return p;
}

bool BlochParams::admissible() const { return gamma.minCoeff() >= 0.0 && pi0.norm() <= 1.0; }

void require_admissible(const BlochParams& params) {
    if (params.gamma.minCoeff() < 0.0) {
        std::ostringstream os;
        os << "positivity admissibility violated: damping rate gamma = (" << params.gamma.transpose()
           << ") has a negative component";
        throw AdmissibilityError(os.str());
    }
    if (params.pi0.norm() > 1.0) {
        std::ostringstream os;
        os << "positivity admissibility violated: |pi0| = " << params.pi0.norm() << " > 1";
        throw AdmissibilityError(os.str());
    }
}

Vec3 bloch_rhs(const BlochParams& params, const Vec3& pi) {
    const Vec3 d = pi - params.pi0;
    Vec3 out = params.omega.cross(d);
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = params.basis.col(i);
        out -= params.gamma[i] * d.dot(e) * e;
    }
    return out;
}

BlochTrajectory bloch_integrate(const BlochParams& params, const Vec3& initial, double t, int steps,
                                double violation_tol) {
    if (steps < 1) throw std::invalid_argument("bloch_integrate: steps must be >= 1");
    if (t < 0.0) throw std::invalid_argument("bloch_integrate: t must be >= 0");
    BlochTrajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    const double dt = t / steps;
    Vec3 pi = initial;
    auto record = [&](double time) {
        traj.times.push_back(time);
        traj.states.push_back(pi);
        if (!traj.first_violation_time && pi.norm() > 1.0 + violation_tol) traj.first_violation_time = time;
    };
    record(0.0);
    for (int s = 0; s < steps; ++s) {
        const Vec3 k1 = bloch_rhs(params, pi);
        const Vec3 k2 = bloch_rhs(params, pi + 0.5 * dt * k1);
        const Vec3 k3 = bloch_rhs(params, pi + 0.5 * dt * k2);
        const Vec3 k4 = bloch_rhs(params, pi + dt * k3);
        pi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        record((s + 1) * dt);
    }
    return traj;
}

void write_bloch_csv(std::ostream& os, const BlochTrajectory& traj) {
    os << "t,pi1,pi2,pi3,norm\n";
    os.precision(17);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& p = traj.states[i];
        os << traj.times[i] << ',' << p.x() << ',' << p.y() << ',' << p.z() << ',' << p.norm() << '\n';
    }
}

Superoperator bloch_generator(const BlochParams& params) {
    const Mat3 m = flow_matrix(params);
    const Vec3 c = -m * params.pi0;
    return Superoperator::from_map(
        2,
        [&](const ComplexMatrix& x) {
            // x = x0 1 + v . sigma evolves as dv/dt = M v + x0 c, dx0/dt = 0
            const Complex x0 = 0.5 * x.trace();
            Eigen::Vector3cd v;
            for (int i = 0; i < 3; ++i) v[i] = 0.5 * (paulis()[i] * x).trace();
            const Eigen::Vector3cd dv = m.cast<Complex>() * v + x0 * c.cast<Complex>();
            ComplexMatrix out = ComplexMatrix::Zero(2, 2);
            for (int i = 0; i < 3; ++i) out += dv[i] * paulis()[i];
            return out;
        },
        "bloch_generator");
}

Superoperator bloch_propagator(const BlochParams& params, double t) {
    const ComplexMatrix g = bloch_generator(params).matrix() * t;
    return Superoperator(g.exp(), "bloch_propagator");
}

double bloch_choi_min_eigenvalue(const BlochParams& params) {
    const double rate = std::max({params.omega.norm(), params.gamma.cwiseAbs().maxCoeff(), 1e-3});
    double worst = std::numeric_limits<double>::infinity();
    for (double scale : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        worst = std::min(worst, choi_min_eigenvalue(bloch_propagator(params, scale / rate)));
    }
    return worst;
}

// ---------------------------------------------------------------------------

std::vector<ComplexMatrix> su_n_generators(int n) {
    if (n < 2 || n > 16) throw std::invalid_argument("su_n_generators: n must be in [2, 16]");
    std::vector<ComplexMatrix> out;
    out.reserve(n * n - 1);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            ComplexMatrix s = ComplexMatrix::Zero(n, n);
            s(j, k) = s(k, j) = 1.0;
            out.push_back(s);
            ComplexMatrix a = ComplexMatrix::Zero(n, n);
            a(j, k) = -kI;
            a(k, j) = kI;
            out.push_back(a);
        }
    }
    for (int l = 1; l < n; ++l) {
        ComplexMatrix d = ComplexMatrix::Zero(n, n);
        const double c = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) d(j, j) = c;
        d(l, l) = -c * l;
        out.push_back(d);
    }
    return out;
}

CoherenceVector coherence_vector(const DensityMatrix& rho) {
    const int n = static_cast<int>(rho.dim());
    const auto gens = su_n_generators(n);
    CoherenceVector cv{RealVector(gens.size()), n};
    for (std::size_t a = 0; a < gens.size(); ++a)
        cv.components[static_cast<Eigen::Index>(a)] = (gens[a] * rho.matrix()).trace().real();
    return cv;
}

DensityMatrix density_from_coherence(const CoherenceVector& cv) {
    const auto gens = su_n_generators(cv.n);
    if (cv.components.size() != static_cast<Eigen::Index>(gens.size()))
        throw DimensionError("density_from_coherence: need n^2 - 1 components");
    ComplexMatrix rho = ComplexMatrix::Identity(cv.n, cv.n) / static_cast<double>(cv.n);
    for (std::size_t a = 0; a < gens.size(); ++a) rho += 0.5 * cv.components[static_cast<Eigen::Index>(a)] * gens[a];
    return DensityMatrix(std::move(rho));
}

}  // namespace decohere
