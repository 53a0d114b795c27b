#pragma once

// Truncated power series over the high-precision complex field. Order is the
// number of stored coefficients (degrees 0..order-1); all operations truncate
// consistently at the shared order.

#include "cftlat/prec.hpp"

#include <stdexcept>
#include <vector>

namespace cftlat {

struct Series {
    std::vector<Cplx> c; // c[k] multiplies z^k

    Series() = default;
    explicit Series(size_t order) : c(order) {}
    static Series constant(const Cplx& a, size_t order) {
        Series s(order);
        s.c[0] = a;
        return s;
    }
    static Series identity(size_t order) {
        Series s(order);
        if (order > 1) s.c[1] = Cplx(1);
        return s;
    }

    size_t order() const { return c.size(); }
    const Cplx& operator[](size_t k) const { return c[k]; }
    Cplx& operator[](size_t k) { return c[k]; }
};

inline Series operator+(const Series& a, const Series& b) {
    Series r(std::min(a.order(), b.order()));
    for (size_t k = 0; k < r.order(); ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

inline Series operator-(const Series& a, const Series& b) {
    Series r(std::min(a.order(), b.order()));
    for (size_t k = 0; k < r.order(); ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

inline Series operator*(const Series& a, const Series& b) {
    Series r(std::min(a.order(), b.order()));
    for (size_t i = 0; i < r.order(); ++i)
        for (size_t j = 0; i + j < r.order() && j < b.order(); ++j)
            r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

inline Series operator*(const Cplx& s, const Series& a) {
    Series r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

// 1/a for series with nonzero constant term.
inline Series inverse(const Series& a) {
    if (norm(a.c[0]) == 0) throw std::domain_error("series inverse: zero constant term");
    Series r(a.order());
    r.c[0] = Cplx(1) / a.c[0];
    for (size_t k = 1; k < a.order(); ++k) {
        Cplx acc(0);
        for (size_t j = 1; j <= k; ++j) acc += a.c[j] * r.c[k - j];
        r.c[k] = -acc / a.c[0];
    }
    return r;
}

inline Series derivative(const Series& a) {
    Series r(a.order());
    for (size_t k = 1; k < a.order(); ++k) r.c[k - 1] = Cplx(Real(static_cast<int>(k))) * a.c[k];
    return r;
}

// log(a) for series with constant term whose principal log is wanted.
inline Series log(const Series& a) {
    // log a = log a0 + integral(a'/a)
    Series r(a.order());
    Series d = derivative(a) * inverse(a);
    r.c[0] = log(a.c[0]);
    for (size_t k = 1; k < a.order(); ++k) r.c[k] = d.c[k - 1] / Cplx(Real(static_cast<int>(k)));
    return r;
}

inline Series exp(const Series& a) {
    // e' = a' e, solved term by term
    Series r(a.order());
    r.c[0] = exp(a.c[0]);
    for (size_t k = 1; k < a.order(); ++k) {
        Cplx acc(0);
        for (size_t j = 1; j <= k; ++j)
            acc += Cplx(Real(static_cast<int>(j))) * a.c[j] * r.c[k - j];
        r.c[k] = acc / Cplx(Real(static_cast<int>(k)));
    }
    return r;
}

// a^p for arbitrary complex exponent; a must have nonzero constant term.
inline Series pow(const Series& a, const Cplx& p) { return exp(p * log(a)); }

// Substitute series b (with b(0)=0) into a.
inline Series compose(const Series& a, const Series& b) {
    if (norm(b.c[0]) != 0) throw std::domain_error("series compose: inner constant term must vanish");
    size_t n = std::min(a.order(), b.order());
    Series r = Series::constant(a.c[0], n);
    Series bp = Series::constant(Cplx(1), n);
    for (size_t k = 1; k < n; ++k) {
        bp = bp * b;
        for (size_t j = 0; j < n; ++j) r.c[j] += a.c[k] * bp.c[j];
    }
    return r;
}

// Compositional inverse of a with a(0)=0, a'(0) != 0 (Newton iteration on
// truncations).
inline Series revert(const Series& a) {
    if (norm(a.c[0]) != 0 || a.order() < 2 || norm(a.c[1]) == 0)
        throw std::domain_error("series revert: need a(0)=0, a'(0)!=0");
    size_t n = a.order();
    Series g(n);
    g.c[1] = Cplx(1) / a.c[1];
    for (size_t prec = 2; prec < n; prec *= 2) {
        // g <- g - (a(g) - z) / a'(g), all to order min(2*prec, n)
        Series ag = compose(a, g);
        ag.c[1] -= Cplx(1);
        Series dag = compose(derivative(a), g);
        Series corr = ag * inverse(dag);
        for (size_t k = 0; k < n; ++k) g.c[k] -= corr.c[k];
    }
    // final polish
    Series ag = compose(a, g);
    ag.c[1] -= Cplx(1);
    Series corr = ag * inverse(compose(derivative(a), g));
    for (size_t k = 0; k < n; ++k) g.c[k] -= corr.c[k];
    return g;
}

inline Cplx eval(const Series& a, const Cplx& z) {
    Cplx acc(0);
    for (size_t k = a.order(); k-- > 0;) acc = acc * z + a.c[k];
    return acc;
}

} // namespace cftlat
