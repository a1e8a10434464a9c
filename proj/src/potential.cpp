#include "susydec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace susydec {

namespace {

double equilibrium_residual_tol(const Polynomial& vprime, double x) {
    const int deg = std::max(vprime.degree(), 1);
    return 1e-12 * (1.0 + std::pow(std::abs(x), deg));
}

}  // namespace

SuperpotentialModel::SuperpotentialModel(Polynomial w_, double mass_, double hbar_)
    : w(std::move(w_)), mass(mass_), hbar(hbar_) {
    if (!(mass > 0.0)) throw Error("mass must be positive");
    if (!(hbar > 0.0)) throw Error("hbar must be positive");
}

HarmonicChannel::HarmonicChannel(Channel ch, double x0_, double omega0_, double v0_,
                                 double mass_, double hbar_)
    : channel(ch), x0(x0_), omega0(omega0_), v0(v0_), mass(mass_), hbar(hbar_) {
    if (!(omega0 > 0.0))
        throw UnstableEquilibrium("omega0 must be positive (channel " +
                                  std::string(channel_name(ch)) + ")");
    f = -mass * omega0 * omega0 * x0 * std::sqrt(hbar / (2.0 * mass * omega0));
    e0 = v0 + 0.5 * mass * omega0 * omega0 * x0 * x0;
    g = f / hbar;
}

double HarmonicChannel::period() const { return 2.0 * M_PI / omega0; }

double HarmonicChannel::vacuum_width() const {
    return std::sqrt(hbar / (2.0 * mass * omega0));
}

double HarmonicChannel::quadratic_potential(double x) const {
    const double d = x - x0;
    return v0 + 0.5 * mass * omega0 * omega0 * d * d;
}

Polynomial effective_potential(const SuperpotentialModel& model, Channel ch) {
    const double c = model.hbar / std::sqrt(2.0 * model.mass);
    return model.w * model.w + (channel_sign(ch) * c) * model.w.derivative();
}

Polynomial force(const SuperpotentialModel& model, Channel ch) {
    return -effective_potential(model, ch).derivative();
}

std::vector<double> find_equilibria(const SuperpotentialModel& model, Channel ch) {
    const Polynomial v = effective_potential(model, ch);
    const Polynomial vp = v.derivative();
    if (vp.degree() < 1) {
        throw NoStableEquilibrium("V_" + std::string(channel_name(ch)) +
                                  " has no stable equilibrium");
    }
    const Polynomial vpp = vp.derivative();
    std::vector<double> stable;
    for (double r : real_roots(vp)) {
        if (std::abs(vp(r)) > equilibrium_residual_tol(vp, r)) continue;
        if (vpp(r) > 0.0) stable.push_back(r);
    }
    if (stable.empty()) {
        throw NoStableEquilibrium("V_" + std::string(channel_name(ch)) +
                                  " has no stable equilibrium");
    }
    std::sort(stable.begin(), stable.end());
    return stable;
}

HarmonicChannel harmonic_params(const SuperpotentialModel& model, Channel ch, double x0) {
    const Polynomial v = effective_potential(model, ch);
    const Polynomial vp = v.derivative();
    const double resid = std::abs(vp(x0));
    if (resid > equilibrium_residual_tol(vp, x0)) {
        throw NotAnEquilibrium("gradient residual " + std::to_string(resid) +
                               " at x0=" + std::to_string(x0));
    }
    const double curvature = vp.derivative()(x0);
    if (!(curvature > 0.0)) {
        throw UnstableEquilibrium("V'' <= 0 at x0=" + std::to_string(x0));
    }
    const double omega0 = std::sqrt(curvature / model.mass);
    return HarmonicChannel(ch, x0, omega0, v(x0), model.mass, model.hbar);
}

double eq21_frequency(const SuperpotentialModel& model, Channel ch, double x0) {
    const Polynomial v = effective_potential(model, ch);
    const Polynomial vp = v.derivative();
    if (std::abs(vp(x0)) > equilibrium_residual_tol(vp, x0)) {
        throw NotAnEquilibrium("gradient residual at x0=" + std::to_string(x0));
    }
    const double s = channel_sign(ch);
    const Polynomial w1 = model.w.derivative();
    const Polynomial w3 = w1.derivative().derivative();
    const double wx = model.w(x0);
    const double w1x = w1(x0);
    const double c = model.hbar / std::sqrt(2.0 * model.mass);
    return 2.0 * w1x * w1x - s * (4.0 / c) * wx * wx * w1x + s * c * w3(x0);
}

double select_default_equilibrium(const SuperpotentialModel& model, Channel ch) {
    const Polynomial v = effective_potential(model, ch);
    const auto xs = find_equilibria(model, ch);
    double best = xs.front();
    for (double x : xs) {
        const double dv = v(x) - v(best);
        if (dv < 0.0) {
            best = x;
        } else if (dv == 0.0) {
            if (std::abs(x) < std::abs(best) ||
                (std::abs(x) == std::abs(best) && x < best))
                best = x;
        }
    }
    return best;
}

}  // namespace susydec
