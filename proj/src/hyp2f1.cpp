#include "cftlat/hyp2f1.hpp"

#include <array>
#include <stdexcept>

namespace cftlat {

namespace {

constexpr double kSeriesRadius = 0.72;

cd series_2f1(cd a, cd b, cd c, cd z) {
    cd term(1.0), acc(1.0);
    for (int n = 0; n < 4000; ++n) {
        double dn = n;
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        acc += term;
        if (std::abs(term) < 1e-19 * (std::abs(acc) + 1e-30) && n > 4) return acc;
    }
    throw std::runtime_error("hyp2f1_cd: series did not converge");
}

// Taylor continuation of the hypergeometric ODE along a straight path.
// Used only in the small regions none of the Kummer maps cover well.
// Differentiating z(1-z)F'' + (c-(a+b+1)z)F' - abF = 0 n times gives
//   z0(1-z0) F^{(n+2)} = (n+a)(n+b) F^{(n)} - (n(1-2z0) + c-(a+b+1)z0) F^{(n+1)}.
cd ode_continue(cd a, cd b, cd c, cd z) {
    cd z0 = 0.5 * z / std::abs(z);
    cd f = series_2f1(a, b, c, z0);
    cd fp = a * b / c * series_2f1(a + 1.0, b + 1.0, c + 1.0, z0);
    cd dir = z - z0;
    double dist = std::abs(dir);
    dir /= dist;
    double done = 0;
    while (done < dist) {
        double r = std::min(std::abs(z0), std::abs(z0 - 1.0)) * 0.38;
        double h = std::min(r, dist - done);
        cd step = h * dir;
        std::array<cd, 44> d; // d[k] = F^{(k)}(z0)
        d[0] = f;
        d[1] = fp;
        cd A = z0 * (1.0 - z0);
        for (int n = 0; n + 2 < static_cast<int>(d.size()); ++n) {
            cd dn(static_cast<double>(n));
            d[n + 2] = ((dn + a) * (dn + b) * d[n]
                        - (dn * (1.0 - 2.0 * z0) + c - (a + b + 1.0) * z0) * d[n + 1]) / A;
        }
        cd val(0), dval(0), hp(1.0);
        double fact = 1.0;
        for (size_t k = 0; k < d.size(); ++k) {
            val += d[k] * hp / fact;
            if (k + 1 < d.size()) dval += d[k + 1] * hp / fact;
            hp *= step;
            fact *= static_cast<double>(k + 1);
        }
        f = val;
        fp = dval;
        z0 += step;
        done += h;
    }
    return f;
}

cd pow_cd(cd base, cd expo) { return std::exp(expo * std::log(base)); }

} // namespace

cd lgamma_cd(cd z) {
    static const double b2k[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680,
                                 1.0 / 1188, -691.0 / 360360, 1.0 / 156,
                                 -3617.0 / 122400, 43867.0 / 244188};
    if (z.real() < 0.5) {
        cd pz = M_PI * z;
        return std::log(M_PI / std::sin(pz)) - lgamma_cd(1.0 - z);
    }
    cd shift(0);
    while (z.real() < 14) {
        shift += std::log(z);
        z += 1.0;
    }
    cd acc = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * M_PI);
    cd zp = 1.0 / z, z2 = zp * zp;
    for (int k = 0; k < 9; ++k) {
        acc += b2k[k] * zp;
        zp *= z2;
    }
    return acc - shift;
}

cd hyp2f1_cd(cd a, cd b, cd c, cd z) {
    auto G = [](cd x) { return gamma_cd(x); };
    double az = std::abs(z);
    if (az <= kSeriesRadius) return series_2f1(a, b, c, z);

    cd w = z / (z - 1.0);
    if (std::abs(w) <= kSeriesRadius) // Pfaff
        return pow_cd(1.0 - z, -a) * series_2f1(a, c - b, c, w);

    cd omz = 1.0 - z;
    if (std::abs(omz) <= kSeriesRadius) {
        cd t1 = G(c) * G(c - a - b) / (G(c - a) * G(c - b)) * series_2f1(a, b, a + b - c + 1.0, omz);
        cd t2 = G(c) * G(a + b - c) / (G(a) * G(b)) * pow_cd(omz, c - a - b)
              * series_2f1(c - a, c - b, c - a - b + 1.0, omz);
        return t1 + t2;
    }

    cd iz = 1.0 / z;
    if (std::abs(iz) <= kSeriesRadius) {
        cd t1 = G(c) * G(b - a) / (G(b) * G(c - a)) * pow_cd(-z, -a)
              * series_2f1(a, a - c + 1.0, a - b + 1.0, iz);
        cd t2 = G(c) * G(a - b) / (G(a) * G(c - b)) * pow_cd(-z, -b)
              * series_2f1(b, b - c + 1.0, b - a + 1.0, iz);
        return t1 + t2;
    }

    cd v = 1.0 - iz; // = (z-1)/z
    if (std::abs(v) <= kSeriesRadius) {
        // 1-z connection composed with Pfaff on both terms
        cd t1 = G(c) * G(c - a - b) / (G(c - a) * G(c - b)) * pow_cd(z, -a)
              * series_2f1(a, a - c + 1.0, a + b - c + 1.0, v);
        cd t2 = G(c) * G(a + b - c) / (G(a) * G(b)) * pow_cd(omz, c - a - b) * pow_cd(z, a - c)
              * series_2f1(c - a, 1.0 - a, c - a - b + 1.0, v);
        return t1 + t2;
    }

    cd u = 1.0 / omz;
    if (std::abs(u) <= kSeriesRadius) {
        // 1/z connection composed with Pfaff
        cd t1 = G(c) * G(b - a) / (G(b) * G(c - a)) * pow_cd(omz, -a)
              * series_2f1(a, c - b, a - b + 1.0, u);
        cd t2 = G(c) * G(a - b) / (G(a) * G(c - b)) * pow_cd(omz, -b)
              * series_2f1(b, c - a, b - a + 1.0, u);
        return t1 + t2;
    }

    return ode_continue(a, b, c, z);
}

Real hyp2f1_real(const Real& a, const Real& b, const Real& c, const Real& x) {
    if (mp::abs(x) >= 1) throw std::domain_error("hyp2f1_real: |x| must be < 1");
    if (x < Real("-0.7")) {
        // Pfaff to shrink the argument
        Real w = x / (x - 1);
        return mp::pow(1 - x, -a) * hyp2f1_real(a, c - b, c, w);
    }
    Real term(1), acc(1);
    for (int n = 0; n < 100000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x;
        acc += term;
        if (mp::abs(term) < Real("1e-72") * (mp::abs(acc) + 1)) return acc;
    }
    throw std::runtime_error("hyp2f1_real: series did not converge");
}

} // namespace cftlat
