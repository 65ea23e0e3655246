#include "decohere/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "decohere/hilbert.hpp"

namespace decohere {

PhaseSpaceGrid::PhaseSpaceGrid(Eigen::Index n, double length) : n_(n), length_(length) {
    if (n < 4 || !std::has_single_bit(static_cast<std::uint64_t>(n)))
        throw std::invalid_argument("phase-space grid: n_x must be a power of two >= 4");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("phase-space grid: L must be positive");
}

RealVector PhaseSpaceGrid::positions() const {
    RealVector xs(n_);
    for (Eigen::Index j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

RealVector PhaseSpaceGrid::momenta() const {
    RealVector ps(n_);
    for (Eigen::Index l = 0; l < n_; ++l) ps[l] = p(l);
    return ps;
}

double PhaseSpaceGrid::min_image(double d) const {
    return d - length_ * std::floor(d / length_ + 0.5);
}

GridState::GridState(ComplexMatrix rho, PhaseSpaceGrid grid, const Tolerances& tol)
    : rho_(std::move(rho)), grid_(grid) {
    const auto n = grid_.size();
    if (rho_.rows() != n || rho_.cols() != n) throw DimensionError("grid state: matrix size differs from grid");
    if (!rho_.allFinite()) throw InvariantError("grid state: non-finite entries");
    // hermiticity and positivity are judged on the grid operator rho * dx
    const double dx = grid_.dx();
    if (hermiticity_defect(rho_) * dx > tol.herm) throw InvariantError("grid state: hermiticity violated");
    if (std::abs(trace() - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "grid state: unit trace violated (sum rho_ii dx = " << trace() << ")";
        throw InvariantError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(rho_) * dx, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.psd) {
        std::ostringstream os;
        os << "grid state: positivity violated (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
        throw InvariantError(os.str());
    }
}

GridState GridState::pure(const ComplexVector& psi, const PhaseSpaceGrid& grid) {
    const double n2 = psi.squaredNorm() * grid.dx();
    if (!(n2 > 0.0)) throw InvariantError("grid state: zero wave function");
    const ComplexVector v = psi / std::sqrt(n2);
    return GridState(v * v.adjoint(), grid);
}

GridState GridState::maximally_mixed(const PhaseSpaceGrid& grid) {
    const auto n = grid.size();
    return GridState(ComplexMatrix::Identity(n, n) / grid.length(), grid);
}

GridState GridState::uniform_coherent(const PhaseSpaceGrid& grid) {
    const auto n = grid.size();
    return GridState(ComplexMatrix::Constant(n, n, Complex(1.0 / grid.length())), grid);
}

RealVector GridState::position_density() const { return rho_.diagonal().real(); }

double GridState::trace() const { return rho_.diagonal().real().sum() * grid_.dx(); }

double GridState::purity() const {
    const double dx = grid_.dx();
    return rho_.squaredNorm() * dx * dx;
}

double GridState::entropy() const { return von_neumann_entropy(ComplexMatrix(rho_ * grid_.dx())); }

GridState GridState::mix(const GridState& a, const GridState& b, double p) {
    if (!(a.grid() == b.grid())) throw DimensionError("grid state: mixing states on different grids");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("grid state: mixing weight outside [0, 1]");
    return GridState(p * a.rho() + (1.0 - p) * b.rho(), a.grid());
}

ComplexVector gaussian_packet(const PhaseSpaceGrid& grid, double center, double width, double k0) {
    ComplexVector psi(grid.size());
    const double norm = std::pow(std::numbers::pi * width * width, -0.25);
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        const double d = grid.min_image(x - center);
        psi[j] = norm * std::exp(-d * d / (2.0 * width * width)) * std::exp(kI * (k0 * x));
    }
    return psi / std::sqrt(psi.squaredNorm() * grid.dx());
}

ComplexVector cat_state(const PhaseSpaceGrid& grid, double separation, double width) {
    ComplexVector psi = gaussian_packet(grid, -0.5 * separation, width) +
                        gaussian_packet(grid, 0.5 * separation, width);
    return psi / std::sqrt(psi.squaredNorm() * grid.dx());
}

RealVector momentum_density(const GridState& state) {
    const auto& g = state.grid();
    const auto n = g.size();
    const double dx = g.dx();
    RealVector out(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        ComplexVector f(n);
        for (Eigen::Index a = 0; a < n; ++a) f[a] = std::exp(-kI * (g.p(l) * g.x(a)));
        const Complex v = f.transpose() * state.rho() * f.conjugate();
        out[l] = v.real() * dx * dx / (2.0 * std::numbers::pi);
    }
    return out;
}

namespace {

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("binary grid: truncated input");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& os, double v) { write_u64(os, std::bit_cast<std::uint64_t>(v)); }
double read_f64(std::istream& is) { return std::bit_cast<double>(read_u64(is)); }

}  // namespace

void write_grid_state_binary(std::ostream& os, const GridState& state) {
    const auto n = state.grid().size();
    write_u64(os, static_cast<std::uint64_t>(n));
    write_f64(os, state.grid().length());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            write_f64(os, state.rho()(i, j).real());
            write_f64(os, state.rho()(i, j).imag());
        }
}

GridState read_grid_state_binary(std::istream& is) {
    const auto n = static_cast<Eigen::Index>(read_u64(is));
    const double length = read_f64(is);
    PhaseSpaceGrid grid(n, length);
    ComplexMatrix rho(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = read_f64(is);
            rho(i, j) = Complex(re, read_f64(is));
        }
    return GridState(std::move(rho), grid);
}

}  // namespace decohere
