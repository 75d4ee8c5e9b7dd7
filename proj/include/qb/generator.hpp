// generator.hpp - time-dependent Lindblad operators in the instantaneous
// eigenbasis and the 9x9 master-equation generator
//
// The equation integrated downstream is, in scaled time s = t/tf,
//     d rho/ds = tf * ( -i [H_diag, rho] + dissipator(rho) ) + M-terms(rho)
// with H_diag = diag(-delta, 0, +delta).  The dissipator sums
// gamma_ab(w) ( L_b rho L_a^+ - 1/2 {L_a^+ L_b, rho} ) over channels
// a,b in {x,z} and Bohr frequencies w in {0, +-delta, +-2 delta}.  The
// M-terms rho W - W rho, with W the antisymmetric eigenbasis-rotation
// matrix, are present only in the Full variant and carry no tf factor.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qb/bath.hpp"
#include "qb/schedule.hpp"
#include "qb/types.hpp"

namespace qb {

enum class Channel { X, Z };

// One jump operator L_{channel, bohr_freq}(s), expressed in the
// instantaneous eigenbasis; L^+_{a,w} = L_{a,-w}.
struct LindbladOp {
    Channel channel;
    double bohr_freq;
    Mat3c matrix;
};

enum class Variant { Full, AdiabaticLimit };

inline const char* variant_name(Variant v) {
    return v == Variant::Full ? "full" : "adiabatic";
}

struct GeneratorOptions {
    Variant variant{Variant::Full};
    bool phases{true};       // keep the -i[H_diag, rho] coherence phases
    bool lamb_shift{false};  // reserved hook; no implementation behind it
};

// Closed forms of the positive-frequency operators.  With a = A/delta,
// b = B/delta and
//   u = (a+b)/sqrt(2),  v = (a^2-b^2)/2,  w = (a-b)/2,  q = -sqrt(2) a b,
// the nonzero entries are
//   L_{x,0} = diag(-u, 0, u)         L_{z,0} = diag(v, -2v, v)
//   L_{x,delta}: (1,2) = -w, (2,3) = +w
//   L_{z,delta}: (1,2) = q,  (2,3) = q
//   L_{z,2delta}: (1,3) = v          L_{x,2delta} = 0
namespace detail {

struct ClosedFormOps {
    Mat3c x0, z0, xd, zd, x2d, z2d;
};

inline ClosedFormOps closed_form_ops(double a, double b) {
    const double u = (a + b) / std::sqrt(2.0);
    const double v = 0.5 * (a * a - b * b);
    const double w = 0.5 * (a - b);
    const double q = -std::sqrt(2.0) * a * b;
    ClosedFormOps ops;
    ops.x0 = Mat3c::Zero();
    ops.x0(0, 0) = -u;
    ops.x0(2, 2) = u;
    ops.z0 = Mat3c::Zero();
    ops.z0(0, 0) = v;
    ops.z0(1, 1) = -2.0 * v;
    ops.z0(2, 2) = v;
    ops.xd = Mat3c::Zero();
    ops.xd(0, 1) = -w;
    ops.xd(1, 2) = w;
    ops.zd = Mat3c::Zero();
    ops.zd(0, 1) = q;
    ops.zd(1, 2) = q;
    ops.x2d = Mat3c::Zero();
    ops.z2d = Mat3c::Zero();
    ops.z2d(0, 2) = v;
    return ops;
}

// G += c * ( kron(Lb, conj(La)) - 1/2 kron(La^+ Lb, I) - 1/2 kron(I, (La^+ Lb)^T) )
// in the row-major vectorization vec(rho)[3i+j] = rho(i,j).
inline void add_dissipator_term(Mat9c& G, double c, const Mat3c& La, const Mat3c& Lb) {
    const Mat3c K = La.adjoint() * Lb;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    G(3 * i + j, 3 * k + l) += c * Lb(i, k) * std::conj(La(j, l));
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                G(3 * i + j, 3 * k + j) -= 0.5 * c * K(i, k);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                G(3 * i + j, 3 * i + l) -= 0.5 * c * K(l, j);
}

}  // namespace detail

// The ten operators of one instant: (x,0), (z,0), (x,+-delta), (z,+-delta),
// (x,+-2delta), (z,+-2delta); the x-channel 2delta pair is identically zero.
inline std::vector<LindbladOp> lindblad_ops(const DriveSchedule& sched, double s) {
    const Eigensystem sys = eigensystem(sched, s);
    const Amplitudes amp = amplitudes(sched, s);
    const double a = amp.a / sys.delta;
    const double b = amp.b / sys.delta;
    const detail::ClosedFormOps ops = detail::closed_form_ops(a, b);
    const double d = sys.delta;
    std::vector<LindbladOp> out;
    out.reserve(10);
    out.push_back({Channel::X, 0.0, ops.x0});
    out.push_back({Channel::Z, 0.0, ops.z0});
    out.push_back({Channel::X, d, ops.xd});
    out.push_back({Channel::Z, d, ops.zd});
    out.push_back({Channel::X, -d, ops.xd.adjoint()});
    out.push_back({Channel::Z, -d, ops.zd.adjoint()});
    out.push_back({Channel::X, 2.0 * d, ops.x2d});
    out.push_back({Channel::Z, 2.0 * d, ops.z2d});
    out.push_back({Channel::X, -2.0 * d, ops.x2d.adjoint()});
    out.push_back({Channel::Z, -2.0 * d, ops.z2d.adjoint()});
    return out;
}

struct Generator {
    Mat9c matrix;
    Variant variant;
    double s;
    double tf;
};

inline Generator build_generator(const DriveSchedule& sched, const BathSpec& bath,
                                 double s, double tf,
                                 const GeneratorOptions& opts = {}) {
    validate(bath);
    if (!(tf > 0.0) || !std::isfinite(tf))
        throw std::invalid_argument("tf must be positive and finite");
    if (opts.lamb_shift)
        throw std::invalid_argument("Lamb shift correction is not implemented");

    const Eigensystem sys = eigensystem(sched, s);
    const Amplitudes amp = amplitudes(sched, s);
    const double d = sys.delta;
    const detail::ClosedFormOps ops = detail::closed_form_ops(amp.a / d, amp.b / d);

    Generator gen;
    gen.matrix = Mat9c::Zero();
    gen.variant = opts.variant;
    gen.s = s;
    gen.tf = tf;
    Mat9c& G = gen.matrix;

    // Dissipator, sector by sector.  Positive-frequency sectors use the
    // closed forms, negative ones their adjoints, each with its own rate.
    const double cross = bath.cross_coupling ? 1.0 : 0.0;
    const Mat3c zero = Mat3c::Zero();
    struct Sector {
        double omega;
        const Mat3c* x;
        const Mat3c* z;
    };
    const Mat3c xd_m = ops.xd.adjoint();
    const Mat3c zd_m = ops.zd.adjoint();
    const Mat3c z2d_m = ops.z2d.adjoint();
    const Sector sectors[5] = {
        {0.0, &ops.x0, &ops.z0},
        {d, &ops.xd, &ops.zd},
        {-d, &xd_m, &zd_m},
        {2.0 * d, &zero, &ops.z2d},
        {-2.0 * d, &zero, &z2d_m},
    };
    for (const Sector& sec : sectors) {
        const double g = tf * spectral_rate(bath, sec.omega);
        if (g == 0.0) continue;
        detail::add_dissipator_term(G, g, *sec.x, *sec.x);
        detail::add_dissipator_term(G, g, *sec.z, *sec.z);
        if (cross != 0.0) {
            detail::add_dissipator_term(G, g, *sec.x, *sec.z);
            detail::add_dissipator_term(G, g, *sec.z, *sec.x);
        }
    }

    // Unitary phases: diagonal in the vectorized picture.
    if (opts.phases) {
        const std::complex<double> mi(0.0, -1.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                G(3 * i + j, 3 * i + j) += mi * tf * (sys.eps[i] - sys.eps[j]);
    }

    // Eigenbasis rotation rho W - W rho, added last so the AdiabaticLimit
    // matrix plus the standalone M block reproduces Full entry for entry.
    if (opts.variant == Variant::Full) {
        const double m = nonadiabatic_coupling(sched, s);
        Mat3 W = Mat3::Zero();
        W(0, 1) = -m;
        W(1, 0) = m;
        W(1, 2) = m;
        W(2, 1) = -m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l)
                    G(3 * i + j, 3 * i + l) += W(l, j);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j)
                    G(3 * i + j, 3 * k + j) -= W(i, k);
    }
    return gen;
}

inline Mat3c apply(const Generator& gen, const Mat3c& rho) {
    return unvectorize(gen.matrix * vectorize(rho));
}

// Entrywise transcription of the generator's action, written directly in
// terms of the x/y rate coefficients.  Kept as an independent cross-check
// of build_generator; not used by the integrator.
inline Mat3c componentwise_rhs(const DriveSchedule& sched, const BathSpec& bath,
                               double s, double tf, const GeneratorOptions& opts,
                               const Mat3c& rho) {
    if (!(tf > 0.0) || !std::isfinite(tf))
        throw std::invalid_argument("tf must be positive and finite");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("rho must be Hermitian");
    if (std::abs(rho.trace() - std::complex<double>(1.0)) > 1e-8)
        throw std::invalid_argument("rho must have unit trace");

    const RateSet r = rate_set(bath, sched, s);
    const auto& x = r.x;
    const auto& y = r.y;

    // Population transfer combinations.
    const double p = x[1] + x[3] + x[5] + x[7];     // gain 2 -> 1
    const double pp = x[2] + x[4] + x[6] + x[8];    // gain 1 -> 2
    const double rr = x[1] + x[7] - x[3] - x[5];    // gain 3 -> 2
    const double rp = x[2] + x[8] - x[4] - x[6];    // gain 2 -> 3
    // Coherence damping and population-coherence couplings.
    const double g12 = -0.5 * x[1] - x[2] - 0.5 * x[3] - 0.5 * x[5] - 0.5 * x[7]
                       - x[8] - 0.5 * x[10]
                       - 0.5 * y[1] - 4.5 * y[2] + 0.5 * y[3] + 2.5 * y[4];
    const double g13 = -0.5 * (x[1] + x[2] + x[4] + x[6] + x[7] + x[8] + x[9] + x[10])
                       + 0.5 * (x[3] + x[5])
                       - 2.0 * y[1] + y[3] - y[4];
    const double g23 = -x[1] - 0.5 * x[2] + 0.5 * x[4] + 0.5 * x[6] - x[7]
                       - 0.5 * x[8] - 0.5 * x[9]
                       - 0.5 * y[1] - 4.5 * y[2] - 2.5 * y[3] - 0.5 * y[4];
    const double k1 = -x[1] + x[7] - x[3] + x[5];
    const double k2 = -x[1] + x[7] + x[3] - x[5];
    const double k1p = -x[2] + x[8] - x[4] + x[6];
    const double k2p = -x[2] + x[8] + x[4] - x[6];

    Mat3c d = Mat3c::Zero();
    d(0, 0) = p * rho(1, 1) + x[9] * rho(2, 2) - (pp + x[10]) * rho(0, 0);
    d(1, 1) = pp * rho(0, 0) + rr * rho(2, 2) - (p + rp) * rho(1, 1);
    d(2, 2) = x[10] * rho(0, 0) + rp * rho(1, 1) - (rr + x[9]) * rho(2, 2);
    d(0, 1) = g12 * rho(0, 1) + k1 * rho(1, 2);
    d(1, 0) = g12 * rho(1, 0) + k2 * rho(2, 1);
    d(0, 2) = g13 * rho(0, 2);
    d(2, 0) = g13 * rho(2, 0);
    d(1, 2) = g23 * rho(1, 2) + k1p * rho(0, 1);
    d(2, 1) = g23 * rho(2, 1) + k2p * rho(1, 0);
    d *= tf;

    if (opts.phases) {
        const std::complex<double> ph(0.0, r.delta * tf);
        d(0, 1) += ph * rho(0, 1);
        d(1, 0) -= ph * rho(1, 0);
        d(0, 2) += 2.0 * ph * rho(0, 2);
        d(2, 0) -= 2.0 * ph * rho(2, 0);
        d(1, 2) += ph * rho(1, 2);
        d(2, 1) -= ph * rho(2, 1);
    }

    if (opts.variant == Variant::Full) {
        const double m = nonadiabatic_coupling(sched, s);
        d(0, 0) += m * (rho(0, 1) + rho(1, 0));
        d(1, 1) -= m * (rho(0, 1) + rho(1, 0) + rho(1, 2) + rho(2, 1));
        d(2, 2) += m * (rho(1, 2) + rho(2, 1));
        d(0, 1) -= m * (rho(0, 0) + rho(0, 2) - rho(1, 1));
        d(1, 0) -= m * (rho(0, 0) + rho(2, 0) - rho(1, 1));
        d(0, 2) += m * (rho(0, 1) + rho(1, 2));
        d(2, 0) += m * (rho(1, 0) + rho(2, 1));
        d(1, 2) += m * (rho(1, 1) - rho(0, 2) - rho(2, 2));
        d(2, 1) += m * (rho(1, 1) - rho(2, 0) - rho(2, 2));
    }
    return d;
}

}  // namespace qb
