#pragma once

// Arithmetic foundation: 64-digit reals (MPFR-backed), a complex type on top,
// and exact rationals. All model data (S-matrix, F-symbols, Gram matrices,
// block coefficients) is computed in this precision; geometry quadrature runs
// in plain double.

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <complex>
#include <string>

namespace cftlat {

inline constexpr unsigned kPrecisionDigits = 64;

namespace mp = boost::multiprecision;

using Real = mp::number<mp::mpfr_float_backend<kPrecisionDigits>, mp::et_off>;
using Rational = mp::mpq_rational;
using BigInt = mp::mpz_int;

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline Real to_real(const Rational& r) {
    return Real(numerator(r).str()) / Real(denominator(r).str());
}

// Smallest magnitude treated as a genuine value in identity checks; the
// working precision is ~1e-64, so 1e-40 leaves plenty of headroom.
inline Real real_eps_loose() { return Real("1e-40"); }

struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(Real r) : re(std::move(r)), im(0) {}
    Cplx(double r) : re(r), im(0) {}
    Cplx(int r) : re(r), im(0) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    static Cplx i() { return Cplx(Real(0), Real(1)); }

    Cplx operator-() const { return Cplx(-re, -im); }
    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
    Cplx& operator*=(const Cplx& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cplx& operator/=(const Cplx& o) {
        Real d = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = r;
        return *this;
    }
};

inline Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
inline Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
inline Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
inline Cplx operator/(Cplx a, const Cplx& b) { return a /= b; }
inline bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }

inline Cplx conj(const Cplx& z) { return Cplx(z.re, -z.im); }
inline Real norm(const Cplx& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Cplx& z) { return mp::sqrt(norm(z)); }
inline Real arg(const Cplx& z) { return mp::atan2(z.im, z.re); }

inline Cplx exp(const Cplx& z) {
    Real m = mp::exp(z.re);
    return Cplx(m * mp::cos(z.im), m * mp::sin(z.im));
}
inline Cplx log(const Cplx& z) { return Cplx(mp::log(abs(z)), arg(z)); }
inline Cplx sqrt(const Cplx& z) {
    Real m = mp::sqrt(abs(z));
    Real a = arg(z) / 2;
    return Cplx(m * mp::cos(a), m * mp::sin(a));
}
inline Cplx pow(const Cplx& z, const Real& p) {
    if (z.im == 0 && z.re > 0) return Cplx(mp::pow(z.re, p));
    return exp(Cplx(p) * log(z));
}
inline Cplx pow(const Cplx& z, const Cplx& p) { return exp(p * log(z)); }

inline std::complex<double> to_cd(const Cplx& z) {
    return {to_double(z.re), to_double(z.im)};
}

} // namespace cftlat
