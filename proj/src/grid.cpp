#include "susydec/grid.hpp"

#include <fftw3.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "susydec/errors.hpp"

namespace susydec {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::mutex fftw_planner_mutex;

/// Forward/backward in-place FFT pair on one buffer.
class FftPair {
  public:
    explicit FftPair(int n) : n_(n) {
        buf_ = fftw_alloc_complex(static_cast<size_t>(n));
        if (!buf_) throw Error("fftw allocation failed");
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    /// backward, including the 1/n normalization
    void backward() {
        fftw_execute(bwd_);
        cplx* p = data();
        const double s = 1.0 / n_;
        for (int j = 0; j < n_; ++j) p[j] *= s;
    }

  private:
    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

std::vector<double> potential_samples(const SuperpotentialModel& model,
                                      const SpatialGrid& grid, Channel ch,
                                      const HarmonicChannel* clamp) {
    std::vector<double> v(grid.points.size());
    if (clamp) {
        for (size_t j = 0; j < v.size(); ++j)
            v[j] = clamp->quadratic_potential(grid.points[j]);
    } else {
        const Polynomial pot = effective_potential(model, ch);
        for (size_t j = 0; j < v.size(); ++j) v[j] = pot(grid.points[j]);
    }
    return v;
}

/// Central-difference momentum -i hbar d/dx, truncated (not wrapped) at the
/// box edge.
Eigen::MatrixXcd momentum_matrix(const SpatialGrid& grid, double hbar) {
    const int n = grid.n;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    const cplx c(0.0, -hbar / (2.0 * grid.dx()));
    for (int j = 0; j < n; ++j) {
        if (j + 1 < n) p(j, j + 1) = c;
        if (j - 1 >= 0) p(j, j - 1) = -c;
    }
    return p;
}

double relative_residual(const Eigen::MatrixXcd& num, const Eigen::MatrixXcd& den) {
    const double d = den.norm();
    if (d == 0.0) return num.norm();
    return num.norm() / d;
}

double convergence_order(double coarse, double fine) {
    if (coarse <= SusyAlgebraReport::exact_floor && fine <= SusyAlgebraReport::exact_floor)
        return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

}  // namespace

SusyAlgebraResiduals susy_algebra_residuals(const SuperpotentialModel& model,
                                            const SpatialGrid& grid) {
    const OperatorMatrix q1 = build_supercharge(model, grid, 1);
    const OperatorMatrix q2 = build_supercharge(model, grid, 2);
    const OperatorMatrix h = build_full_hamiltonian(model, grid);

    SusyAlgebraResiduals r;
    r.q1_squared = relative_residual(2.0 * (q1.mat * q1.mat) - h.mat, h.mat);
    r.q2_squared = relative_residual(2.0 * (q2.mat * q2.mat) - h.mat, h.mat);
    const Eigen::MatrixXcd hq = h.mat * q1.mat;
    r.commutator = relative_residual(hq - q1.mat * h.mat, hq);
    const Eigen::MatrixXcd qq = q1.mat * q2.mat;
    r.anticommutator = relative_residual(qq + q2.mat * q1.mat, qq);
    return r;
}

namespace {

void check_boundary(const ChannelWavefunction& psi) {
    const double amp = psi.boundary_amplitude();
    if (amp > 1e-8) {
        throw BoxTooSmall("boundary amplitude " + std::to_string(amp) +
                          " at t=" + std::to_string(psi.time) +
                          " exceeds 1e-8; enlarge the box");
    }
}

}  // namespace

SpatialGrid::SpatialGrid(int n_, double half_width_) : n(n_), half_width(half_width_) {
    if (!is_power_of_two(n) || n < 64)
        throw Error("grid size must be a power of two >= 64, got " + std::to_string(n));
    if (!(half_width > 0.0)) throw Error("grid half_width must be positive");
    points.resize(static_cast<size_t>(n));
    const double d = dx();
    for (int j = 0; j < n; ++j) points[static_cast<size_t>(j)] = -half_width + j * d;
}

double ChannelWavefunction::norm() const {
    double s = 0.0;
    for (const cplx& a : amplitudes) s += std::norm(a);
    return std::sqrt(s * grid->dx());
}

double ChannelWavefunction::boundary_amplitude() const {
    const int n = grid->n;
    const int band = std::max(1, n / 20);
    double amp = 0.0;
    for (int j = 0; j < band; ++j) {
        amp = std::max(amp, std::abs(amplitudes[static_cast<size_t>(j)]));
        amp = std::max(amp, std::abs(amplitudes[static_cast<size_t>(n - 1 - j)]));
    }
    return amp;
}

SpinorState::SpinorState(cplx c_plus_, cplx c_minus_, ChannelWavefunction phi_plus_,
                         ChannelWavefunction phi_minus_)
    : c_plus(c_plus_),
      c_minus(c_minus_),
      phi_plus(std::move(phi_plus_)),
      phi_minus(std::move(phi_minus_)) {
    const double total = std::norm(c_plus) + std::norm(c_minus);
    if (std::abs(total - 1.0) > 1e-9)
        throw Error("spin amplitudes must satisfy |C+|^2 + |C-|^2 = 1");
    if (!phi_plus.grid->same_as(*phi_minus.grid))
        throw GridMismatch("spinor channels live on different grids");
}

void ReducedDensity::validate() const {
    if ((rho - rho.adjoint()).norm() > 1e-12)
        throw Error("reduced density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
        throw Error("reduced density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw Error("reduced density matrix is not positive semidefinite");
}

OperatorMatrix build_block_hamiltonian(const SuperpotentialModel& model,
                                       const SpatialGrid& grid, Channel ch,
                                       const HarmonicChannel* clamp) {
    const int n = grid.n;
    const double dx = grid.dx();
    const double k = model.hbar * model.hbar / (2.0 * model.mass * dx * dx);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = 2.0 * k;
        h(j, (j + 1) % n) = -k;
        h(j, (j + n - 1) % n) = -k;
    }
    const auto v = potential_samples(model, grid, ch, clamp);
    for (int j = 0; j < n; ++j) h(j, j) += v[static_cast<size_t>(j)];
    std::string label = std::string("H_") + channel_name(ch);
    if (clamp) label += " (clamp)";
    return {std::move(h), std::move(label)};
}

OperatorMatrix build_supercharge(const SuperpotentialModel& model,
                                 const SpatialGrid& grid, int which) {
    if (which != 1 && which != 2) throw Error("supercharge index must be 1 or 2");
    const int n = grid.n;
    const Eigen::MatrixXcd a =
        momentum_matrix(grid, model.hbar) / std::sqrt(2.0 * model.mass);
    Eigen::VectorXcd w(n);
    for (int j = 0; j < n; ++j) w(j) = model.w(grid.points[static_cast<size_t>(j)]);
    const Eigen::MatrixXcd wd = w.asDiagonal();

    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    if (which == 1) {
        // (A s1 + W s2)/sqrt(2)
        q.block(0, n, n, n) = s * (a - i * wd);
        q.block(n, 0, n, n) = s * (a + i * wd);
    } else {
        // (A s2 - W s1)/sqrt(2)
        q.block(0, n, n, n) = s * (-i * a - wd);
        q.block(n, 0, n, n) = s * (i * a - wd);
    }
    return {std::move(q), which == 1 ? "Q1" : "Q2"};
}

OperatorMatrix build_full_hamiltonian(const SuperpotentialModel& model,
                                      const SpatialGrid& grid) {
    const int n = grid.n;
    const Eigen::MatrixXcd a =
        momentum_matrix(grid, model.hbar) / std::sqrt(2.0 * model.mass);
    const Eigen::MatrixXcd kin = a * a;
    const double c = model.hbar / std::sqrt(2.0 * model.mass);
    const Polynomial wp = model.w.derivative();

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    h.block(0, 0, n, n) = kin;
    h.block(n, n, n, n) = kin;
    for (int j = 0; j < n; ++j) {
        const double x = grid.points[static_cast<size_t>(j)];
        const double w = model.w(x);
        h(j, j) += w * w + c * wp(x);
        h(n + j, n + j) += w * w - c * wp(x);
    }
    return {std::move(h), "H"};
}

SusyAlgebraReport susy_algebra_report(const SuperpotentialModel& model,
                                      const SpatialGrid& grid) {
    SusyAlgebraReport rep;
    rep.coarse = susy_algebra_residuals(model, grid);
    rep.fine = susy_algebra_residuals(model, SpatialGrid(2 * grid.n, grid.half_width));
    rep.order_q1_squared = convergence_order(rep.coarse.q1_squared, rep.fine.q1_squared);
    rep.order_q2_squared = convergence_order(rep.coarse.q2_squared, rep.fine.q2_squared);
    rep.order_commutator = convergence_order(rep.coarse.commutator, rep.fine.commutator);
    rep.order_anticommutator =
        convergence_order(rep.coarse.anticommutator, rep.fine.anticommutator);
    return rep;
}

ChannelWavefunction initial_packet(std::shared_ptr<const SpatialGrid> grid,
                                   double center, double width, double momentum,
                                   Channel ch, double hbar) {
    if (!(width > 2.0 * grid->dx()))
        throw Error("packet width must exceed 2*dx; refine the grid");
    ChannelWavefunction psi;
    psi.grid = grid;
    psi.channel = ch;
    psi.time = 0.0;
    psi.amplitudes.resize(grid->points.size());
    for (size_t j = 0; j < psi.amplitudes.size(); ++j) {
        const double x = grid->points[j];
        const double d = x - center;
        psi.amplitudes[j] =
            std::exp(cplx(-d * d / (4.0 * width * width), momentum * x / hbar));
    }
    const double nrm = psi.norm();
    for (cplx& a : psi.amplitudes) a /= nrm;
    check_boundary(psi);
    return psi;
}

std::vector<ChannelWavefunction> propagate_at(const SuperpotentialModel& model,
                                              const ChannelWavefunction& psi0,
                                              Channel ch, double dt,
                                              const std::vector<long>& sample_steps,
                                              const HarmonicChannel* clamp) {
    const SpatialGrid& grid = *psi0.grid;
    const int n = grid.n;
    if (!(dt > 0.0)) throw Error("dt must be positive");
    if (sample_steps.empty()) throw Error("no sample steps requested");
    for (size_t i = 0; i + 1 < sample_steps.size(); ++i) {
        if (sample_steps[i] >= sample_steps[i + 1])
            throw Error("sample steps must be strictly increasing");
    }
    if (sample_steps.front() < 0) throw Error("sample steps must be nonnegative");

    const auto v = potential_samples(model, grid, ch, clamp);
    std::vector<cplx> half_phase(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        half_phase[static_cast<size_t>(j)] =
            std::exp(cplx(0.0, -v[static_cast<size_t>(j)] * dt / (2.0 * model.hbar)));
    }
    // exact kinetic step exp(-i hbar k^2 dt / 2m) in the Fourier basis
    std::vector<cplx> kin_phase(static_cast<size_t>(n));
    const double dk = 2.0 * M_PI / (2.0 * grid.half_width);
    for (int j = 0; j < n; ++j) {
        const int m = j <= n / 2 ? j : j - n;
        const double k = m * dk;
        kin_phase[static_cast<size_t>(j)] =
            std::exp(cplx(0.0, -model.hbar * k * k * dt / (2.0 * model.mass)));
    }

    FftPair fft(n);
    cplx* buf = fft.data();
    std::copy(psi0.amplitudes.begin(), psi0.amplitudes.end(), buf);

    std::vector<ChannelWavefunction> out;
    out.reserve(sample_steps.size());
    auto snapshot = [&](long step) {
        ChannelWavefunction snap;
        snap.grid = psi0.grid;
        snap.channel = ch;
        snap.time = psi0.time + step * dt;
        snap.amplitudes.assign(buf, buf + n);
        check_boundary(snap);
        out.push_back(std::move(snap));
    };

    size_t next = 0;
    if (sample_steps[next] == 0) {
        snapshot(0);
        ++next;
    }
    const long last = sample_steps.back();
    for (long step = 1; step <= last; ++step) {
        for (int j = 0; j < n; ++j) buf[j] *= half_phase[static_cast<size_t>(j)];
        fft.forward();
        for (int j = 0; j < n; ++j) buf[j] *= kin_phase[static_cast<size_t>(j)];
        fft.backward();
        for (int j = 0; j < n; ++j) buf[j] *= half_phase[static_cast<size_t>(j)];
        if (next < sample_steps.size() && sample_steps[next] == step) {
            snapshot(step);
            ++next;
        }
    }
    return out;
}

std::vector<ChannelWavefunction> propagate(const SuperpotentialModel& model,
                                           const ChannelWavefunction& psi0,
                                           Channel ch, double dt, long steps,
                                           const HarmonicChannel* clamp,
                                           long sample_every) {
    if (steps < 1) throw Error("steps must be >= 1");
    if (sample_every < 1) throw Error("sample_every must be >= 1");
    std::vector<long> samples;
    for (long s = 0; s < steps; s += sample_every) samples.push_back(s);
    samples.push_back(steps);
    return propagate_at(model, psi0, ch, dt, samples, clamp);
}

DecoherenceSeries decoherence_numeric(const std::vector<ChannelWavefunction>& traj_plus,
                                      const std::vector<ChannelWavefunction>& traj_minus) {
    if (traj_plus.size() != traj_minus.size())
        throw GridMismatch("snapshot counts differ between channels");
    if (traj_plus.empty()) throw GridMismatch("empty snapshot lists");
    DecoherenceSeries series;
    series.method = Method::grid;
    series.times.reserve(traj_plus.size());
    series.values.reserve(traj_plus.size());
    for (size_t k = 0; k < traj_plus.size(); ++k) {
        const ChannelWavefunction& p = traj_plus[k];
        const ChannelWavefunction& m = traj_minus[k];
        if (!p.grid->same_as(*m.grid))
            throw GridMismatch("channel snapshots live on different grids");
        if (std::abs(p.time - m.time) > 1e-12 * (1.0 + std::abs(p.time)))
            throw GridMismatch("channel snapshots are not time-aligned");
        cplx d = 0.0;
        for (size_t j = 0; j < p.amplitudes.size(); ++j)
            d += std::conj(p.amplitudes[j]) * m.amplitudes[j];
        series.times.push_back(p.time);
        series.values.push_back(d * p.grid->dx());
    }
    series.validate();
    return series;
}

ReducedDensity reduced_density(cplx c_plus, cplx c_minus, cplx decoherence) {
    ReducedDensity rd;
    const cplx off = c_plus * std::conj(c_minus) * decoherence;
    rd.rho << std::norm(c_plus), off, std::conj(off), std::norm(c_minus);
    return rd;
}

double purity(const ReducedDensity& rd) { return (rd.rho * rd.rho).trace().real(); }

std::vector<double> spectrum(const OperatorMatrix& op, int k) {
    if (k < 1) throw Error("spectrum count must be >= 1");
    if ((op.mat - op.mat.adjoint()).norm() > 1e-12 * (1.0 + op.mat.norm()))
        throw Error("operator " + op.label + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mat,
                                                       Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const int count = std::min<int>(k, static_cast<int>(ev.size()));
    return std::vector<double>(ev.data(), ev.data() + count);
}

}  // namespace susydec
