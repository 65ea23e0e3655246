#pragma once

#include <functional>
#include <iosfwd>

#include "decohere/grid.hpp"

namespace decohere {

/// W(p, q) sampled on the momentum grid (rows, p_l) times the position grid
/// (columns, q_j). Normalized so that sum W dp dq = 1.
struct WignerFunction {
    RealMatrix values;
    PhaseSpaceGrid grid;
    double imag_residue = 0.0;  // largest imaginary part discarded by the transform

    double normalization() const;
    /// Integral over p: the position density rho(q, q).
    RealVector position_marginal() const;
    /// Integral over q: the momentum density.
    RealVector momentum_marginal() const;
    double min_value() const { return values.minCoeff(); }
};

/// W(p, q) = (1/pi) sum_x exp(2ipx) rho(q - x, q + x) dx, with rho(x, x') = <x|rho|x'>
/// and <x|p> = exp(ipx), so a packet with momentum k0 peaks at p = +k0.
///
/// Index convention: rho is first band-limited (trigonometric) interpolated
/// onto the doubled grid of spacing h = dx/2, so that q +- x lands on grid
/// points for x = k h. Row l, column j of the result is
///   (h/pi) sum_{k=-n/2}^{n/2-1} exp(2 pi i (l - n/2) k / n) rho~(2j - k, 2j + k)
/// with indices mod 2n. The unpaired k = -n/2 term contributes only its real
/// part, which is what pairing it with its k = +n/2 image would give.
WignerFunction wigner_transform(const GridState& state);

/// Riemann sum of f(p, q) W(p, q) dp dq.
double expectation_phase_space(const WignerFunction& w, const std::function<double(double p, double q)>& f);

/// Subtracts the q-average at each p, leaving the traceless coherence components.
WignerFunction finite_interval_correction(const WignerFunction& w);

/// Rows "p,q,W" with header, ordered by p then q.
void write_wigner_csv(std::ostream& os, const WignerFunction& w);
/// Header of two little-endian 8-byte fields (uint64 n_x, float64 L), then
/// row-major doubles W(p_l, q_j).
void write_wigner_binary(std::ostream& os, const WignerFunction& w);
WignerFunction read_wigner_binary(std::istream& is);

}  // namespace decohere
