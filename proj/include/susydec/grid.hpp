#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "susydec/harmonic.hpp"
#include "susydec/potential.hpp"

namespace susydec {

/// Uniform periodic grid x_j = -L + j (2L/n), j = 0..n-1. n is a power of
/// two >= 64 so the kinetic propagation step can run spectrally.
struct SpatialGrid {
    int n;
    double half_width;
    std::vector<double> points;

    SpatialGrid(int n_, double half_width_);
    double dx() const { return 2.0 * half_width / n; }
    bool same_as(const SpatialGrid& other) const {
        return n == other.n && half_width == other.half_width;
    }
};

/// Complex spatial wavefunction of one channel, stamped with its time.
struct ChannelWavefunction {
    std::shared_ptr<const SpatialGrid> grid;
    std::vector<cplx> amplitudes;
    Channel channel;
    double time = 0.0;

    double norm() const;
    /// largest |psi| within 5% of either boundary
    double boundary_amplitude() const;
};

/// Factorized spin (x) space state: (C+, C-) amplitudes and the two channel
/// wavefunctions.
struct SpinorState {
    cplx c_plus;
    cplx c_minus;
    ChannelWavefunction phi_plus;
    ChannelWavefunction phi_minus;

    SpinorState(cplx c_plus_, cplx c_minus_, ChannelWavefunction phi_plus_,
                ChannelWavefunction phi_minus_);
};

struct OperatorMatrix {
    Eigen::MatrixXcd mat;
    std::string label;
};

/// 2x2 spin-sector density matrix over {|+>, |->}.
struct ReducedDensity {
    Eigen::Matrix2cd rho;

    /// Hermitian, unit trace, positive semidefinite (within tolerances).
    void validate() const;
};

/// H_pm = P^2/2m + V_pm(x): 3-point periodic Laplacian kinetic term plus
/// the diagonal potential, or the channel's quadratic model when clamp is
/// supplied.
OperatorMatrix build_block_hamiltonian(const SuperpotentialModel& model,
                                       const SpatialGrid& grid, Channel ch,
                                       const HarmonicChannel* clamp = nullptr);

/// 2n x 2n supercharge with P the central-difference momentum (truncated at
/// the box edge so a non-periodic W introduces no wrap artifacts):
///   Q1 = (P/sqrt(2m) s1 + W s2)/sqrt(2)
///   Q2 = (P/sqrt(2m) s2 - W s1)/sqrt(2)
/// The sign of the W term in Q2 is the one for which H = 2Q1^2 = 2Q2^2 and
/// {Q1,Q2} = 0 hold.
OperatorMatrix build_supercharge(const SuperpotentialModel& model,
                                 const SpatialGrid& grid, int which);

/// 2n x 2n Hamiltonian used by the algebra checks; its kinetic term is the
/// square of the same central-difference momentum that enters the
/// supercharges, so the residuals below measure only the W-commutator
/// discretization error.
OperatorMatrix build_full_hamiltonian(const SuperpotentialModel& model,
                                      const SpatialGrid& grid);

struct SusyAlgebraResiduals {
    double q1_squared;     // |2Q1^2 - H| / |H|
    double q2_squared;     // |2Q2^2 - H| / |H|
    double commutator;     // |[H,Q1]| / |H Q1|
    double anticommutator; // |{Q1,Q2}| / |Q1 Q2|
};

struct SusyAlgebraReport {
    SusyAlgebraResiduals coarse;  // at grid.n
    SusyAlgebraResiduals fine;    // at 2*grid.n
    /// log2(coarse/fine) per residual; NaN when both sit at the exact floor
    double order_q1_squared;
    double order_q2_squared;
    double order_commutator;
    double order_anticommutator;

    static constexpr double exact_floor = 1e-12;
};

/// Residuals of one grid (used directly by the refinement sweep).
SusyAlgebraResiduals susy_algebra_residuals(const SuperpotentialModel& model,
                                            const SpatialGrid& grid);

SusyAlgebraReport susy_algebra_report(const SuperpotentialModel& model,
                                      const SpatialGrid& grid);

/// Normalized Gaussian exp(-(x-center)^2/(4 width^2) + i momentum x / hbar);
/// width is the position standard deviation. Throws BoxTooSmall when the
/// boundary amplitude exceeds 1e-8, Error when width <= 2 dx.
ChannelWavefunction initial_packet(std::shared_ptr<const SpatialGrid> grid,
                                   double center, double width, double momentum,
                                   Channel ch = Channel::plus, double hbar = 1.0);

/// Second-order Strang splitting with an exact spectral kinetic step.
/// Returns snapshots at the listed step indices (each in [0, steps]).
std::vector<ChannelWavefunction> propagate_at(const SuperpotentialModel& model,
                                              const ChannelWavefunction& psi0,
                                              Channel ch, double dt,
                                              const std::vector<long>& sample_steps,
                                              const HarmonicChannel* clamp = nullptr);

/// Snapshots every sample_every steps, always including t = 0 and the final
/// time. Throws BoxTooSmall when a snapshot leaks into the boundary band.
std::vector<ChannelWavefunction> propagate(const SuperpotentialModel& model,
                                           const ChannelWavefunction& psi0,
                                           Channel ch, double dt, long steps,
                                           const HarmonicChannel* clamp = nullptr,
                                           long sample_every = 1);

/// D(t_k) = <phi+(t_k)|phi-(t_k)> by the discrete inner product.
/// Throws GridMismatch when grids or snapshot times differ.
DecoherenceSeries decoherence_numeric(const std::vector<ChannelWavefunction>& traj_plus,
                                      const std::vector<ChannelWavefunction>& traj_minus);

/// rho = |C+|^2 |+><+| + |C-|^2 |-><-| + (C+ C-* |+><-| D + h.c.)
ReducedDensity reduced_density(cplx c_plus, cplx c_minus, cplx decoherence);

/// Tr rho^2
double purity(const ReducedDensity& rho);

/// k lowest eigenvalues, ascending, by dense Hermitian eigensolve.
std::vector<double> spectrum(const OperatorMatrix& op, int k);

}  // namespace susydec
