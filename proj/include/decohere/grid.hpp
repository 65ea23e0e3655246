#pragma once

#include <iosfwd>
#include <numbers>

#include "decohere/types.hpp"

namespace decohere {

/// Uniform periodic position grid x_j = -L/2 + j dx, j = 0..n-1, with the
/// conjugate momentum grid p_l = (l - n/2) 2 pi / L.
class PhaseSpaceGrid {
public:
    /// n must be a power of two (>= 4) and L > 0.
    PhaseSpaceGrid(Eigen::Index n, double length);

    Eigen::Index size() const { return n_; }
    double length() const { return length_; }
    double dx() const { return length_ / static_cast<double>(n_); }
    double dp() const { return 2.0 * std::numbers::pi / length_; }
    double x(Eigen::Index j) const { return -0.5 * length_ + static_cast<double>(j) * dx(); }
    double p(Eigen::Index l) const { return static_cast<double>(l - n_ / 2) * dp(); }
    RealVector positions() const;
    RealVector momenta() const;
    /// Signed distance x_i - x_j folded into [-L/2, L/2).
    double min_image(double dx_signed) const;

    bool operator==(const PhaseSpaceGrid& o) const { return n_ == o.n_ && length_ == o.length_; }

private:
    Eigen::Index n_;
    double length_;
};

/// Density matrix rho(x_i, x_j) on a grid, normalized so that sum_i rho_ii dx = 1.
/// Positivity is with respect to the grid inner product, i.e. of rho * dx.
class GridState {
public:
    GridState(ComplexMatrix rho, PhaseSpaceGrid grid, const Tolerances& tol = kDefaultTol);

    /// |psi><psi| with psi rescaled so that sum |psi|^2 dx = 1.
    static GridState pure(const ComplexVector& psi, const PhaseSpaceGrid& grid);
    /// Identity / L.
    static GridState maximally_mixed(const PhaseSpaceGrid& grid);
    /// All entries 1/L: the k = 0 plane wave, coherent across the whole grid.
    static GridState uniform_coherent(const PhaseSpaceGrid& grid);

    const ComplexMatrix& rho() const { return rho_; }
    const PhaseSpaceGrid& grid() const { return grid_; }
    RealVector position_density() const;  // rho(x, x)
    double trace() const;
    double purity() const;
    /// Von Neumann entropy of the operator rho * dx (nats).
    double entropy() const;
    /// Mixture p a + (1 - p) b on the same grid.
    static GridState mix(const GridState& a, const GridState& b, double p);

private:
    ComplexMatrix rho_;
    PhaseSpaceGrid grid_;
};

/// Normalized Gaussian (pi w^2)^(-1/4) exp(-(x - c)^2 / (2 w^2) + i k0 x) sampled on the grid.
ComplexVector gaussian_packet(const PhaseSpaceGrid& grid, double center, double width, double k0 = 0.0);

/// Equal-weight superposition of packets at +-separation/2, normalized on the grid.
ComplexVector cat_state(const PhaseSpaceGrid& grid, double separation, double width);

/// |<p|psi>|^2-style momentum density rho(p, p) on the momentum grid, from
/// (1/2pi) sum_ab exp(-i p (x_a - x_b)) rho_ab dx^2.
RealVector momentum_density(const GridState& state);

// Shared on-disk formats: JSON {"n_x", "L", "rho": [[re, im], ...]} row-major,
// and binary with a header of two little-endian 8-byte fields (uint64 n_x,
// float64 L) followed by row-major (re, im) doubles.
void write_grid_state_binary(std::ostream& os, const GridState& state);
GridState read_grid_state_binary(std::istream& is);

}  // namespace decohere
