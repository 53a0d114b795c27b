#pragma once

// Gauss hypergeometric evaluation.
//  - hyp2f1_cd: complex double arguments anywhere in the plane, via the Kummer
//    transformation group plus an ODE Taylor-continuation fallback for the
//    lens regions around exp(+-i pi/3). Branch on the [1,inf) cut follows the
//    side of the supplied argument (give it a signed imaginary nudge).
//  - hyp2f1_real: high-precision real argument in (-1, 1) by series/Pfaff,
//    used by test oracles.

#include "cftlat/prec.hpp"

#include <complex>

namespace cftlat {

using cd = std::complex<double>;

cd lgamma_cd(cd z);
inline cd gamma_cd(cd z) { return std::exp(lgamma_cd(z)); }

cd hyp2f1_cd(cd a, cd b, cd c, cd z);

Real hyp2f1_real(const Real& a, const Real& b, const Real& c, const Real& x);

} // namespace cftlat
