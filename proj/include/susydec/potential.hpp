#pragma once

#include <vector>

#include "susydec/errors.hpp"
#include "susydec/polynomial.hpp"

namespace susydec {

enum class Channel { plus, minus };

inline double channel_sign(Channel ch) { return ch == Channel::plus ? 1.0 : -1.0; }
inline const char* channel_name(Channel ch) { return ch == Channel::plus ? "plus" : "minus"; }

/// Superpotential W plus the physical constants; defines the whole system.
struct SuperpotentialModel {
    Polynomial w;
    double mass = 1.0;
    double hbar = 1.0;

    SuperpotentialModel() = default;
    SuperpotentialModel(Polynomial w_, double mass_ = 1.0, double hbar_ = 1.0);
};

/// Harmonic data of one channel about a stable equilibrium x0:
/// frequency omega0 = sqrt(V''(x0)/m), potential value v0 = V(x0), forcing
/// constant f = -m*omega0^2*x0*sqrt(hbar/(2 m omega0)), offset
/// e0 = v0 + m*omega0^2*x0^2/2 and g = f/hbar. Construction rejects
/// omega0 <= 0.
struct HarmonicChannel {
    Channel channel;
    double x0;
    double omega0;
    double v0;
    double f;
    double e0;
    double g;
    double mass;
    double hbar;

    HarmonicChannel(Channel ch, double x0_, double omega0_, double v0_,
                    double mass_ = 1.0, double hbar_ = 1.0);

    double period() const;
    /// position standard deviation of the channel's vacuum state
    double vacuum_width() const;
    /// quadratic model v0 + m*omega0^2*(x-x0)^2/2
    double quadratic_potential(double x) const;
};

/// V_pm(x) = W^2(x) +- (hbar/sqrt(2m)) W'(x)
Polynomial effective_potential(const SuperpotentialModel& model, Channel ch);

/// F_pm = -(d/dx) V_pm, identically.
Polynomial force(const SuperpotentialModel& model, Channel ch);

/// Stable equilibria of V_pm: real roots of V' with V'' > 0, sorted
/// ascending. Companion-matrix roots polished by Newton iteration.
/// Throws NoStableEquilibrium when none exist (including constant V).
std::vector<double> find_equilibria(const SuperpotentialModel& model, Channel ch);

/// Harmonic reduction about a given equilibrium. Throws NotAnEquilibrium
/// when |V'(x0)| exceeds the polish tolerance, UnstableEquilibrium when
/// V''(x0) <= 0.
HarmonicChannel harmonic_params(const SuperpotentialModel& model, Channel ch, double x0);

/// m*omega0^2 evaluated from the superpotential directly:
///   2 W'^2 -+ 4 (sqrt(2m)/hbar) W^2 W' +- (hbar/sqrt(2m)) W'''
/// Cross-check only; agrees with m*harmonic_params(...).omega0^2 at true
/// equilibria. Throws NotAnEquilibrium off-equilibrium.
double eq21_frequency(const SuperpotentialModel& model, Channel ch, double x0);

/// Deterministic default equilibrium when several are stable: global
/// minimum of V (lowest v0), ties broken by smallest |x0|, then by the
/// negative one.
double select_default_equilibrium(const SuperpotentialModel& model, Channel ch);

}  // namespace susydec
