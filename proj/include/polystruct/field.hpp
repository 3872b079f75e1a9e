// field.hpp -- arithmetic in the prime field F_p, 2 <= p <= 31.
//
// Elements are plain ints in [0, p).  Keeping p this small means a field
// element always fits in one byte, dense tables stay addressable, and the
// 5n-variable blow-ups used by the regularity sweeps remain feasible.
#pragma once

#include <cstdint>
#include <vector>

#include "polystruct/errors.hpp"

namespace polystruct {

constexpr int kMaxPrime = 31;

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

struct PrimeField {
    int p;

    explicit PrimeField(int p_) : p(p_) {
        if (!is_prime(p) || p > kMaxPrime)
            throw structural_error("PrimeField: modulus must be prime and <= 31, got " +
                                   std::to_string(p));
    }

    int reduce(long long v) const {
        int r = static_cast<int>(v % p);
        return r < 0 ? r + p : r;
    }
    int add(int a, int b) const { return (a + b) % p; }
    int sub(int a, int b) const { return (a - b + p) % p; }
    int mul(int a, int b) const { return (a * b) % p; }
    int neg(int a) const { return (p - a) % p; }
    int pow(int a, int e) const {
        int r = 1;
        a %= p;
        while (e > 0) {
            if (e & 1) r = r * a % p;
            a = a * a % p;
            e >>= 1;
        }
        return r;
    }
    // p is prime, so a^(p-2) inverts any nonzero a.
    int inv(int a) const {
        if (a % p == 0) throw structural_error("PrimeField: inverse of zero");
        return pow(a % p, p - 2);
    }
};

// A point of F_p^n, coordinates in [0, p).
using Point = std::vector<int>;

// Base-p little-endian point <-> index encoding (variable 1 = least
// significant digit).  This fixed order underlies every file format and
// every exhaustive sweep in the toolkit.
inline long long encode_point(const Point& x, int p) {
    long long idx = 0;
    for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) idx = idx * p + x[i];
    return idx;
}

inline Point decode_point(long long idx, int p, int n) {
    Point x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = static_cast<int>(idx % p);
        idx /= p;
    }
    return x;
}

inline long long pow_ll(int p, int n) {
    long long r = 1;
    while (n-- > 0) r *= p;
    return r;
}

}  // namespace polystruct
