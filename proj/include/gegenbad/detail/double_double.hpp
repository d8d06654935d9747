#pragma once

#include <cmath>

namespace gegenbad::detail {

// Minimal double-double arithmetic (Dekker/Knuth error-free transforms).
// hi holds the value rounded to double, lo the residual; |lo| <= ulp(hi)/2.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_normalize(double hi, double lo) {
    double s = hi + lo;
    double err = lo - (s - hi);
    return {s, err};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return dd_normalize(s.hi, lo);
}

inline DD dd_sub(DD a, DD b) { return dd_add(a, {-b.hi, -b.lo}); }

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return dd_normalize(p.hi, lo);
}

inline DD dd_mul(DD a, double b) {
    DD p = two_prod(a.hi, b);
    double lo = p.lo + a.lo * b;
    return dd_normalize(p.hi, lo);
}

inline DD dd_div(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = dd_sub(a, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q2));
    double q3 = r.hi / b.hi;
    DD s = two_sum(q1, q2);
    return dd_normalize(s.hi, s.lo + q3);
}

inline DD dd_from(double v) { return {v, 0.0}; }

}
