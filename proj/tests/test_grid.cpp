#include <doctest.h>

#include <cmath>
#include <memory>

#include "susydec/grid.hpp"

using namespace susydec;

namespace {

SuperpotentialModel quartic(double c) {
    return SuperpotentialModel(Polynomial({0.0, 0.0, c / std::sqrt(2.0)}));
}

HarmonicChannel channel(double c, Channel ch) {
    const auto m = quartic(c);
    return harmonic_params(m, ch, select_default_equilibrium(m, ch));
}

double variance(const ChannelWavefunction& psi) {
    double mean = 0.0, m2 = 0.0;
    const double dx = psi.grid->dx();
    for (size_t j = 0; j < psi.amplitudes.size(); ++j) {
        const double w = std::norm(psi.amplitudes[j]) * dx;
        mean += psi.grid->points[j] * w;
        m2 += psi.grid->points[j] * psi.grid->points[j] * w;
    }
    return m2 - mean * mean;
}

}  // namespace

TEST_CASE("grid construction rules") {
    CHECK_THROWS_AS(SpatialGrid(100, 5.0), Error);   // not a power of two
    CHECK_THROWS_AS(SpatialGrid(32, 5.0), Error);    // too small
    CHECK_THROWS_AS(SpatialGrid(128, -1.0), Error);  // bad box
    const SpatialGrid g(128, 8.0);
    CHECK(g.dx() == doctest::Approx(0.125));
    CHECK(g.points.front() == -8.0);
    CHECK(g.points.back() == doctest::Approx(8.0 - g.dx()));
}

TEST_CASE("initial packet normalization and guards") {
    auto g = std::make_shared<const SpatialGrid>(512, 10.0);
    const auto psi = initial_packet(g, 0.5, 0.7, 0.3);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK(psi.boundary_amplitude() < 1e-8);
    // width below 2 dx
    CHECK_THROWS_AS(initial_packet(g, 0.0, 0.01, 0.0), Error);
    // packet leaking into the boundary band
    auto tiny = std::make_shared<const SpatialGrid>(128, 2.0);
    CHECK_THROWS_AS(initial_packet(tiny, 0.0, 1.0, 0.0), BoxTooSmall);
}

TEST_CASE("free packet spreads by the closed form") {
    const SuperpotentialModel m{Polynomial{}};
    auto g = std::make_shared<const SpatialGrid>(1024, 30.0);
    const double sigma0 = 1.0;
    const auto psi0 = initial_packet(g, 0.0, sigma0, 0.0);
    const double dt = 0.01;
    const long steps = 500;
    const auto traj = propagate(m, psi0, Channel::plus, dt, steps, nullptr, 100);
    for (const auto& snap : traj) {
        CHECK(std::abs(snap.norm() - 1.0) < 1e-10);
        const double t = snap.time;
        const double expected =
            sigma0 * sigma0 * (1.0 + std::pow(t / (2.0 * sigma0 * sigma0), 2));
        CHECK(variance(snap) == doctest::Approx(expected).epsilon(1e-6));
    }
    CHECK(traj.front().time == 0.0);
    CHECK(traj.back().time == doctest::Approx(steps * dt));
}

TEST_CASE("clamp-mode vacuum packet is stationary") {
    const auto m = quartic(0.5);
    const auto hc = channel(0.5, Channel::plus);
    auto g = std::make_shared<const SpatialGrid>(512, 8.0);
    const auto psi0 =
        initial_packet(g, hc.x0, hc.vacuum_width(), 0.0, Channel::plus);
    const double dt = hc.period() / 20000.0;
    const auto traj = propagate(m, psi0, Channel::plus, dt, 20000, &hc, 5000);
    for (const auto& snap : traj) {
        double dev = 0.0;
        for (size_t j = 0; j < snap.amplitudes.size(); ++j) {
            dev = std::max(dev, std::abs(std::norm(snap.amplitudes[j]) -
                                         std::norm(psi0.amplitudes[j])));
        }
        CHECK(dev < 1e-8);
    }
}

TEST_CASE("vacuum energy expectation in clamp mode") {
    const auto hc = channel(0.5, Channel::plus);
    const SpatialGrid g(1024, 8.0);
    auto gp = std::make_shared<const SpatialGrid>(g.n, g.half_width);
    const auto psi = initial_packet(gp, hc.x0, hc.vacuum_width(), 0.0);
    const auto h = build_block_hamiltonian(quartic(0.5), g, Channel::plus, &hc);
    Eigen::VectorXcd v(g.n);
    for (int j = 0; j < g.n; ++j) v(j) = psi.amplitudes[static_cast<size_t>(j)];
    const double energy = (v.adjoint() * h.mat * v)(0, 0).real() * g.dx();
    CHECK(energy ==
          doctest::Approx(hc.v0 + 0.5 * hc.hbar * hc.omega0).epsilon(1e-5));
}

TEST_CASE("built operators are Hermitian") {
    const auto m = quartic(0.5);
    const SpatialGrid g(128, 4.0);
    for (const auto& op :
         {build_block_hamiltonian(m, g, Channel::plus),
          build_block_hamiltonian(m, g, Channel::minus), build_supercharge(m, g, 1),
          build_supercharge(m, g, 2), build_full_hamiltonian(m, g)}) {
        CHECK((op.mat - op.mat.adjoint()).norm() <= 1e-12 * (1.0 + op.mat.norm()));
    }
}

TEST_CASE("algebra residuals shrink at second order for the quartic") {
    const auto m = quartic(0.5);
    const auto rep = susy_algebra_report(m, SpatialGrid(128, 4.0));
    CHECK(rep.coarse.q1_squared > rep.fine.q1_squared);
    CHECK(rep.order_q1_squared == doctest::Approx(2.0).epsilon(0.2));
    CHECK(rep.order_q2_squared == doctest::Approx(2.0).epsilon(0.2));
    CHECK(rep.order_commutator == doctest::Approx(2.0).epsilon(0.2));
    // even W: {Q1, Q2} vanishes identically in this discretization
    CHECK(rep.coarse.anticommutator <= SusyAlgebraReport::exact_floor);
    CHECK(std::isnan(rep.order_anticommutator));
}

TEST_CASE("W = 0 puts every residual at the exact floor") {
    const SuperpotentialModel m{Polynomial{}};
    const auto r = susy_algebra_residuals(m, SpatialGrid(128, 4.0));
    CHECK(r.q1_squared <= SusyAlgebraReport::exact_floor);
    CHECK(r.q2_squared <= SusyAlgebraReport::exact_floor);
    CHECK(r.commutator <= SusyAlgebraReport::exact_floor);
    CHECK(r.anticommutator <= SusyAlgebraReport::exact_floor);
}

TEST_CASE("numeric decoherence demands aligned snapshots") {
    const SuperpotentialModel m{Polynomial{}};
    auto g1 = std::make_shared<const SpatialGrid>(128, 12.0);
    auto g2 = std::make_shared<const SpatialGrid>(256, 12.0);
    const auto a = propagate(m, initial_packet(g1, 0.0, 1.0, 0.0), Channel::plus,
                             0.01, 10, nullptr, 5);
    const auto b = propagate(m, initial_packet(g2, 0.0, 1.0, 0.0), Channel::minus,
                             0.01, 10, nullptr, 5);
    CHECK_THROWS_AS(decoherence_numeric(a, b), GridMismatch);
    const auto c = propagate(m, initial_packet(g1, 0.0, 1.0, 0.0), Channel::minus,
                             0.02, 10, nullptr, 5);
    CHECK_THROWS_AS(decoherence_numeric(a, c), GridMismatch);
    const auto d = decoherence_numeric(a, a);
    for (const cplx& v : d.values) CHECK(std::abs(v - cplx(1.0)) < 1e-12);
}

TEST_CASE("reduced density matrix identities") {
    const cplx cp(std::sqrt(0.3), 0.0);
    const cplx cm(0.0, std::sqrt(0.7));
    for (double dabs : {1.0, 0.5, 0.0}) {
        const cplx d = dabs * std::exp(cplx(0.0, 0.4));
        const ReducedDensity rho = reduced_density(cp, cm, d);
        rho.validate();
        CHECK(rho.rho(0, 0).real() == doctest::Approx(0.3).epsilon(1e-14));
        CHECK(rho.rho(1, 1).real() == doctest::Approx(0.7).epsilon(1e-14));
        const double expected =
            1.0 - 2.0 * std::norm(cp * cm) * (1.0 - dabs * dabs);
        CHECK(purity(rho) == doctest::Approx(expected).epsilon(1e-14));
    }
    // D = 0: exactly diagonal
    const ReducedDensity diag = reduced_density(cp, cm, 0.0);
    CHECK(diag.rho(0, 1) == cplx(0.0));
    CHECK(diag.rho(1, 0) == cplx(0.0));
}

TEST_CASE("clamp spectrum is the oscillator ladder") {
    const auto hc = channel(0.5, Channel::plus);
    const auto m = quartic(0.5);
    const SpatialGrid g(1024, 8.0);
    const auto ev = spectrum(build_block_hamiltonian(m, g, Channel::plus, &hc), 5);
    for (int k = 0; k < 5; ++k) {
        const double expected = hc.v0 + hc.hbar * hc.omega0 * (k + 0.5);
        // 3-point kinetic stencil: O(dx^2) accuracy
        CHECK(ev[static_cast<size_t>(k)] ==
              doctest::Approx(expected).epsilon(5e-4));
    }
    CHECK_THROWS_AS(spectrum(build_block_hamiltonian(m, g, Channel::plus), 0), Error);
}

TEST_CASE("spinor state construction guards") {
    auto g1 = std::make_shared<const SpatialGrid>(128, 12.0);
    auto g2 = std::make_shared<const SpatialGrid>(256, 12.0);
    const auto p1 = initial_packet(g1, 0.0, 1.0, 0.0, Channel::plus);
    const auto m1 = initial_packet(g1, 0.0, 1.0, 0.0, Channel::minus);
    const auto m2 = initial_packet(g2, 0.0, 1.0, 0.0, Channel::minus);
    const cplx r(M_SQRT1_2, 0.0);
    CHECK_NOTHROW(SpinorState(r, r, p1, m1));
    CHECK_THROWS_AS(SpinorState(r, r, p1, m2), GridMismatch);
    CHECK_THROWS_AS(SpinorState(cplx(1.0), cplx(1.0), p1, m1), Error);
}
