#pragma once

// Gamma function at working precision, for real and complex arguments.
// Real arguments go straight to MPFR. Complex arguments use the Stirling
// series after an argument shift, which is exact to any precision given
// enough Bernoulli terms.

#include "cftlat/prec.hpp"

namespace cftlat {

// log Gamma for complex z, principal branch. Valid away from the poles.
Cplx lgamma_cplx(Cplx z);

inline Cplx gamma_cplx(const Cplx& z) { return exp(lgamma_cplx(z)); }

// 1/Gamma(x) for real x. Returns exactly 0 at non-positive integers when the
// caller flags them; numeric arguments that merely sit close to a pole come
// back as the (huge-magnitude) reciprocal.
Real rec_gamma(const Real& x);

// Gamma of an exact rational argument, with pole detection: returns
// {value, is_pole}. At a pole the value is meaningless and is_pole is true,
// so products should use rec_gamma_rational instead.
Real gamma_rational(const Rational& x);

// 1/Gamma of an exact rational; exactly 0 at non-positive integers.
Real rec_gamma_rational(const Rational& x);

inline bool is_nonpositive_integer(const Rational& x) {
    return denominator(x) == 1 && numerator(x) <= 0;
}

} // namespace cftlat
