#pragma once

#include <complex>
#include <span>
#include <vector>

#include "susydec/potential.hpp"

namespace susydec {

using cplx = std::complex<double>;

/// Closed-form Wei-Norman coefficients of one forced-oscillator channel:
///   alpha(t) = -(g/w)(e^{iwt}-1)
///   beta(t)  =  (g/w)(e^{-iwt}-1)
///   i p(t)   = i(g^2/w - E0/hbar) t + (g^2/w^2)(e^{-iwt}-1)
///   A = -alpha,  iQ = ip - |A|^2/2
struct WeiNormanState {
    double t;
    cplx p;
    cplx alpha;
    cplx beta;
    cplx A;
    cplx Q;
};

/// Gaussian wavepacket, amplitude proportional to
///   exp(-a (x-center)^2 / 2 + i momentum (x-center)/hbar + i phase)
/// with a = width_param (inverse complex variance, Re a > 0).
struct GaussianPacket {
    double center = 0.0;
    double momentum = 0.0;
    cplx width_param{1.0, 0.0};
    double phase = 0.0;

    GaussianPacket() = default;
    GaussianPacket(double center_, double momentum_, cplx width_param_,
                   double phase_ = 0.0);

    /// vacuum packet of an oscillator: a = m*omega/hbar
    static GaussianPacket vacuum(double mass, double hbar, double omega,
                                 double center = 0.0);
};

/// The two-channel overlap coefficients of the analytic decoherence factor.
struct OverlapCoefficients {
    cplx v, w, x, y;
};

enum class Method { paper_eq30, equal_freq_eq34, gaussian_oracle, grid };

const char* method_name(Method m);
const char* method_suffix(Method m);  // CSV column suffix

/// Time-stamped complex decoherence factor samples.
struct DecoherenceSeries {
    std::vector<double> times;
    std::vector<cplx> values;
    Method method;

    /// times strictly increasing; |D| <= 1 + 1e-9; D(0) = 1 within 1e-12
    /// when the first sample is at t = 0 (shared initial packet).
    void validate() const;
};

WeiNormanState wei_norman(const HarmonicChannel& hc, double t);

/// Unit-modulus channel phase exp(ip + |A|^2/2) of the evolved coherent
/// state (the normalization-consistent companion of wei_norman).
cplx channel_phase(const HarmonicChannel& hc, double t);

/// Schrodinger-picture coherent label beta(t) = -A(t) e^{-i w t}; the packet
/// center follows the classical trajectory x0(1 - cos w t) from rest at
/// x = 0.
cplx coherent_label(const HarmonicChannel& hc, double t);

struct PhaseSpacePoint {
    double x;
    double p;
};

/// Mean position/momentum of the evolved channel packet; matches classical
/// Newton integration of m xdd = -m w^2 (x - x0) started from the origin.
PhaseSpacePoint classical_trajectory(const HarmonicChannel& hc, double t);

/// Psi(t,x) of the evolved channel: coherent state of vacuum width
/// sqrt(hbar/(m w)) (in the exp(-a x^2/2) sense, a = m w / hbar) centered
/// on the classical trajectory, including the global channel phase.
std::vector<cplx> coherent_wavepacket(const HarmonicChannel& hc, double t,
                                      std::span<const double> xs);

/// V, W, X, Y exactly as the analytic two-frequency overlap prescribes.
OverlapCoefficients overlap_coefficients(double mass, double omega_plus,
                                         double omega_minus);

/// Analytic decoherence factor assembled verbatim from the published
/// closed form (prefactor e^{iQ- - iQ+}, exponent built from A+, A- and the
/// overlap coefficients). Kept as a separately-flagged method; the
/// gaussian_oracle and grid methods are the ground truth it is compared
/// against.
cplx decoherence_paper(const HarmonicChannel& hc_plus,
                       const HarmonicChannel& hc_minus, double t);

/// Exact equal-frequency decoherence factor:
///   |D| = exp(-(2 (g+ - g-)^2 / w^2) sin^2(w t / 2))
///   arg D = (g-^2 - g+^2)(t/w - sin(w t)/w^2) - deltaE0 t / hbar
/// with deltaE0 = E0(minus) - E0(plus).
cplx decoherence_equal_freq(double omega0, double g_plus, double g_minus,
                            double delta_e0, double t, double hbar = 1.0);

/// Convenience: equal-frequency series for a channel pair.
DecoherenceSeries decoherence_equal_freq_series(const HarmonicChannel& hc_plus,
                                                const HarmonicChannel& hc_minus,
                                                std::span<const double> ts);

DecoherenceSeries decoherence_paper_series(const HarmonicChannel& hc_plus,
                                           const HarmonicChannel& hc_minus,
                                           std::span<const double> ts);

/// Exact Gaussian dynamics under each channel's quadratic model
/// v0 + m w^2 (x-x0)^2 / 2: classical center/momentum, closed-form complex
/// width (linearized Riccati flow with branch-tracked square root), global
/// phase from the classical action. Returns the closed-form overlap of the
/// two evolved Gaussians at each time.
DecoherenceSeries gaussian_oracle(const HarmonicChannel& hc_plus,
                                  const HarmonicChannel& hc_minus,
                                  const GaussianPacket& initial,
                                  std::span<const double> ts);

/// One evolved Gaussian of the oracle, sampled on xs (used for density
/// output and quadrature checks).
std::vector<cplx> gaussian_oracle_wavefunction(const HarmonicChannel& hc,
                                               const GaussianPacket& initial,
                                               double t,
                                               std::span<const double> xs);

}  // namespace susydec
