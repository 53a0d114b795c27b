#include "cftlat/gamma.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <stdexcept>

namespace cftlat {

namespace {

// Stirling series for log Gamma, valid for large |z| with Re z > 0.
Cplx stirling_lgamma(const Cplx& z) {
    Cplx lz = log(z);
    Cplx acc = (z - Cplx(Real("0.5"))) * lz - z
             + Cplx(mp::log(2 * real_pi()) / 2);
    Cplx zinv2 = Cplx(1) / (z * z);
    Cplx zpow = Cplx(1) / z;
    Real tol = Real("1e-75");
    for (unsigned k = 1; k <= 120; ++k) {
        Real b2k = boost::math::bernoulli_b2n<Real>(k);
        Cplx term = Cplx(b2k / (2 * k * (2 * k - 1))) * zpow;
        acc += term;
        if (abs(term) < tol * (abs(acc) + 1)) break;
        zpow *= zinv2;
    }
    return acc;
}

} // namespace

Cplx lgamma_cplx(Cplx z) {
    // Reflect into Re z >= 1/2, then shift until Stirling converges fast.
    if (z.re < Real("0.5")) {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        Cplx pz = Cplx(real_pi()) * z;
        Cplx sinpz(mp::sin(pz.re) * mp::cosh(pz.im), mp::cos(pz.re) * mp::sinh(pz.im));
        if (abs(sinpz) == 0) throw std::domain_error("lgamma_cplx: pole");
        return log(Cplx(real_pi()) / sinpz) - lgamma_cplx(Cplx(Real(1)) - z);
    }
    Cplx shiftlog(0);
    int shifts = 0;
    while (z.re < 48 && shifts < 96) {
        shiftlog += log(z);
        z += Cplx(1);
        ++shifts;
    }
    return stirling_lgamma(z) - shiftlog;
}

Real rec_gamma(const Real& x) {
    if (x > 0) return 1 / mp::tgamma(x);
    Real r = mp::round(x);
    if (r <= 0 && mp::abs(x - r) < Real("1e-58")) return Real(0);
    return 1 / mp::tgamma(x);
}

Real gamma_rational(const Rational& x) {
    if (is_nonpositive_integer(x)) throw std::domain_error("gamma_rational: pole");
    return mp::tgamma(to_real(x));
}

Real rec_gamma_rational(const Rational& x) {
    if (is_nonpositive_integer(x)) return Real(0);
    return 1 / mp::tgamma(to_real(x));
}

} // namespace cftlat
