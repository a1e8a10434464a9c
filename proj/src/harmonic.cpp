#include "susydec/harmonic.hpp"

#include <cmath>

namespace susydec {

namespace {

constexpr cplx I{0.0, 1.0};

/// Evolved Gaussian of one channel's quadratic model in Heller form
///   psi(x) = C0 / sqrt(P) * exp((i/hbar)[A (x-xb)^2 + pb (x-xb) + S])
/// with branch-tracked sqrt(P).
struct HellerState {
    double xb, pb;   // classical center and momentum
    cplx width_a;    // Heller width parameter A(t)
    double action;   // classical action S(t) including the -v0 t term
    cplx sqrt_p;     // branch-tracked sqrt of the linearized flow P(t)
    double c0;       // real normalization constant of the initial packet
    double extra_phase;  // initial packet phase (common to both channels)
};

HellerState evolve_gaussian(const HarmonicChannel& hc, const GaussianPacket& init,
                            double t) {
    const double m = hc.mass, hbar = hc.hbar, w = hc.omega0, x0 = hc.x0;
    const double d0 = init.center - x0;
    const double v0_over_mw = init.momentum / (m * w);
    const double cwt = std::cos(w * t), swt = std::sin(w * t);

    HellerState s;
    s.xb = x0 + d0 * cwt + v0_over_mw * swt;
    s.pb = init.momentum * cwt - m * w * d0 * swt;

    // classical action: integral of (p^2/2m - m w^2 (x-x0)^2/2) dt - v0 t
    const double radius = std::hypot(d0, v0_over_mw);
    double osc = 0.0;
    if (radius > 0.0) {
        const double phi = std::atan2(-v0_over_mw, d0);
        osc = -(m * w * radius * radius / 4.0) *
              (std::sin(2.0 * (w * t + phi)) - std::sin(2.0 * phi));
    }
    s.action = -hc.v0 * t + osc;

    // width: A(t) = (m/2) Pdot/P with Pddot = -w^2 P, P(0)=1, Pdot(0)=2A0/m
    const cplx a0_heller = I * hbar * init.width_param / 2.0;
    const cplx pdot0 = 2.0 * a0_heller / m;
    const cplx P = cwt + pdot0 / w * swt;
    const cplx Pdot = -w * swt + pdot0 * cwt;
    s.width_a = 0.5 * m * Pdot / P;

    // sqrt(P) on the branch continuous in t: P((k pi)/w) = (-1)^k exactly and
    // arg P increases monotonically, so arg P = k pi + Arg((-1)^k P) with
    // k = round(w t / pi).
    const double k = std::round(w * t / M_PI);
    const double sign = (std::llround(k) % 2 == 0) ? 1.0 : -1.0;
    const double theta = k * M_PI + std::arg(sign * P);
    s.sqrt_p = std::sqrt(std::abs(P)) * std::exp(I * (theta / 2.0));

    s.c0 = std::pow(init.width_param.real() / M_PI, 0.25);
    s.extra_phase = init.phase;
    return s;
}

}  // namespace

GaussianPacket::GaussianPacket(double center_, double momentum_, cplx width_param_,
                               double phase_)
    : center(center_), momentum(momentum_), width_param(width_param_), phase(phase_) {
    if (!(width_param.real() > 0.0))
        throw Error("GaussianPacket: Re(width_param) must be positive");
}

GaussianPacket GaussianPacket::vacuum(double mass, double hbar, double omega,
                                      double center) {
    return GaussianPacket(center, 0.0, cplx{mass * omega / hbar, 0.0});
}

const char* method_name(Method m) {
    switch (m) {
        case Method::paper_eq30: return "paper_eq30";
        case Method::equal_freq_eq34: return "equal_freq_eq34";
        case Method::gaussian_oracle: return "gaussian_oracle";
        case Method::grid: return "grid";
    }
    return "?";
}

const char* method_suffix(Method m) {
    switch (m) {
        case Method::paper_eq30: return "eq30";
        case Method::equal_freq_eq34: return "eq34";
        case Method::gaussian_oracle: return "oracle";
        case Method::grid: return "grid";
    }
    return "?";
}

void DecoherenceSeries::validate() const {
    if (times.size() != values.size())
        throw Error("DecoherenceSeries: times/values size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw Error("DecoherenceSeries: times not strictly increasing");
    for (const cplx& v : values)
        if (std::abs(v) > 1.0 + 1e-9)
            throw Error("DecoherenceSeries: |D| exceeds 1 + 1e-9");
    if (!times.empty() && times.front() == 0.0 &&
        std::abs(values.front() - 1.0) > 1e-12)
        throw Error("DecoherenceSeries: D(0) != 1");
}

WeiNormanState wei_norman(const HarmonicChannel& hc, double t) {
    const double w = hc.omega0, g = hc.g;
    const cplx eiwt = std::exp(I * w * t);
    const cplx emiwt = std::exp(-I * w * t);

    WeiNormanState s;
    s.t = t;
    s.alpha = -(g / w) * (eiwt - 1.0);
    s.beta = (g / w) * (emiwt - 1.0);
    const cplx ip = I * (g * g / w - hc.e0 / hc.hbar) * t +
                    (g * g / (w * w)) * (emiwt - 1.0);
    s.p = -I * ip;
    s.A = -s.alpha;
    s.Q = -I * (ip - 0.5 * std::norm(s.A));
    return s;
}

cplx channel_phase(const HarmonicChannel& hc, double t) {
    const WeiNormanState s = wei_norman(hc, t);
    return std::exp(I * s.p + 0.5 * std::norm(s.A));
}

cplx coherent_label(const HarmonicChannel& hc, double t) {
    const WeiNormanState s = wei_norman(hc, t);
    return -s.A * std::exp(-I * hc.omega0 * t);
}

PhaseSpacePoint classical_trajectory(const HarmonicChannel& hc, double t) {
    const cplx beta = coherent_label(hc, t);
    const double m = hc.mass, w = hc.omega0, hbar = hc.hbar;
    return {std::sqrt(2.0 * hbar / (m * w)) * beta.real(),
            std::sqrt(2.0 * hbar * m * w) * beta.imag()};
}

std::vector<cplx> coherent_wavepacket(const HarmonicChannel& hc, double t,
                                      std::span<const double> xs) {
    const double m = hc.mass, w = hc.omega0, hbar = hc.hbar;
    const cplx beta = coherent_label(hc, t);
    const cplx phase = channel_phase(hc, t);
    const double norm_c = std::pow(m * w / (M_PI * hbar), 0.25);
    const double scale = std::sqrt(2.0 * m * w / hbar);
    const cplx offset = -0.5 * beta * beta - 0.5 * std::norm(beta);

    std::vector<cplx> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double x = xs[j];
        out[j] = phase * norm_c *
                 std::exp(-m * w * x * x / (2.0 * hbar) + scale * beta * x + offset);
    }
    return out;
}

OverlapCoefficients overlap_coefficients(double mass, double omega_plus,
                                         double omega_minus) {
    if (!(omega_plus > 0.0) || !(omega_minus > 0.0))
        throw Error("overlap_coefficients: frequencies must be positive");
    const double r = std::sqrt(omega_plus / omega_minus);
    const double s = std::sqrt(omega_plus * omega_minus);
    OverlapCoefficients oc;
    oc.v = 0.5 * r + I * (0.5 * mass * s);
    oc.w = 0.5 * r - I * (0.5 * mass * s);
    oc.x = -I / (2.0 * mass * s) - 0.5 / r;
    oc.y = -I / (2.0 * mass * s) + 0.5 / r;
    return oc;
}

cplx decoherence_paper(const HarmonicChannel& hc_plus,
                       const HarmonicChannel& hc_minus, double t) {
    const WeiNormanState sp = wei_norman(hc_plus, t);
    const WeiNormanState sm = wei_norman(hc_minus, t);
    const OverlapCoefficients oc =
        overlap_coefficients(hc_plus.mass, hc_plus.omega0, hc_minus.omega0);

    const cplx ap = sp.A;
    const cplx ap_dag = std::conj(sp.A);
    const cplx am = sm.A;
    const cplx left = ap * oc.w - ap_dag * oc.y;
    const cplx right = ap_dag * oc.x - ap * oc.v;
    const cplx expo = -0.5 * left * right - left * am - 0.5 * std::norm(am);
    return std::exp(I * (sm.Q - sp.Q)) * std::exp(expo);
}

cplx decoherence_equal_freq(double omega0, double g_plus, double g_minus,
                            double delta_e0, double t, double hbar) {
    if (!(omega0 > 0.0)) throw Error("decoherence_equal_freq: omega0 must be positive");
    const double w = omega0;
    const double dg2 = g_minus * g_minus - g_plus * g_plus;
    const double sh = std::sin(0.5 * w * t);
    const double dg = g_plus - g_minus;
    const double log_mag = -(2.0 * dg * dg / (w * w)) * sh * sh;
    const double phase =
        dg2 * (t / w - std::sin(w * t) / (w * w)) - delta_e0 * t / hbar;
    return std::exp(cplx{log_mag, phase});
}

DecoherenceSeries decoherence_equal_freq_series(const HarmonicChannel& hc_plus,
                                                const HarmonicChannel& hc_minus,
                                                std::span<const double> ts) {
    const double wp = hc_plus.omega0, wm = hc_minus.omega0;
    if (std::abs(wp - wm) > 1e-9 * (wp + wm))
        throw Error("equal_freq method requires equal channel frequencies");
    DecoherenceSeries s;
    s.method = Method::equal_freq_eq34;
    s.times.assign(ts.begin(), ts.end());
    s.values.reserve(ts.size());
    for (double t : ts)
        s.values.push_back(decoherence_equal_freq(wp, hc_plus.g, hc_minus.g,
                                                  hc_minus.e0 - hc_plus.e0, t,
                                                  hc_plus.hbar));
    return s;
}

DecoherenceSeries decoherence_paper_series(const HarmonicChannel& hc_plus,
                                           const HarmonicChannel& hc_minus,
                                           std::span<const double> ts) {
    DecoherenceSeries s;
    s.method = Method::paper_eq30;
    s.times.assign(ts.begin(), ts.end());
    s.values.reserve(ts.size());
    for (double t : ts) s.values.push_back(decoherence_paper(hc_plus, hc_minus, t));
    return s;
}

DecoherenceSeries gaussian_oracle(const HarmonicChannel& hc_plus,
                                  const HarmonicChannel& hc_minus,
                                  const GaussianPacket& initial,
                                  std::span<const double> ts) {
    const double hbar = hc_plus.hbar;
    DecoherenceSeries s;
    s.method = Method::gaussian_oracle;
    s.times.assign(ts.begin(), ts.end());
    s.values.reserve(ts.size());
    for (double t : ts) {
        const HellerState a = evolve_gaussian(hc_plus, initial, t);
        const HellerState b = evolve_gaussian(hc_minus, initial, t);
        // integral of conj(psi_a) psi_b: collect the quadratic exponent
        const cplx ca = std::conj(a.width_a);
        const cplx quad = (I / hbar) * (b.width_a - ca);
        const cplx lin = (I / hbar) * (-2.0 * b.width_a * b.xb + 2.0 * ca * a.xb +
                                       b.pb - a.pb);
        const cplx cst = (I / hbar) * (b.width_a * b.xb * b.xb - ca * a.xb * a.xb -
                                       b.pb * b.xb + a.pb * a.xb +
                                       cplx{b.action, 0.0} - cplx{a.action, 0.0});
        const cplx integral =
            std::sqrt(M_PI / (-quad)) * std::exp(-lin * lin / (4.0 * quad) + cst);
        s.values.push_back(a.c0 * b.c0 * integral / (std::conj(a.sqrt_p) * b.sqrt_p));
    }
    return s;
}

std::vector<cplx> gaussian_oracle_wavefunction(const HarmonicChannel& hc,
                                               const GaussianPacket& initial,
                                               double t,
                                               std::span<const double> xs) {
    const HellerState s = evolve_gaussian(hc, initial, t);
    const double hbar = hc.hbar;
    std::vector<cplx> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double d = xs[j] - s.xb;
        out[j] = s.c0 / s.sqrt_p *
                 std::exp((I / hbar) * (s.width_a * d * d + s.pb * d + s.action) +
                          I * s.extra_phase);
    }
    return out;
}

}  // namespace susydec
