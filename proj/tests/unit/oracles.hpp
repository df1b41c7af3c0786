#pragma once
// Independent reference computations used only by the tests.

#include <cstdint>
#include <vector>

namespace oracle {

// Coefficients a_0..a_prec of q * prod_{n>=1} (1 - q^n)^2 (1 - q^{11n})^2.
inline std::vector<long> eta_11(int prec) {
    std::vector<long> f(prec + 1, 0);
    f[0] = 1;  // series without the leading q
    auto mul_one_minus = [&](int k) {
        for (int i = prec; i >= k; --i) f[i] -= f[i - k];
    };
    for (int n = 1; n <= prec; ++n) {
        mul_one_minus(n);
        mul_one_minus(n);
        if (11 * n <= prec) {
            mul_one_minus(11 * n);
            mul_one_minus(11 * n);
        }
    }
    std::vector<long> out(prec + 1, 0);
    for (int i = 1; i <= prec; ++i) out[i] = f[i - 1];
    return out;
}

inline long gcd(long a, long b) {
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// sum of d | n with gcd(d, a) = 1 and gcd(n/d, b) = 1, by trial over 1..n
inline long constrained_sigma(long n, long a, long b) {
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0 && gcd(d, a) == 1 && gcd(n / d, b) == 1) s += d;
    return s;
}

inline long pow_mod(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// Legendre symbol by Euler's criterion
inline int legendre(long a, long p) {
    long r = pow_mod(a, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

// 1/12 prod (p-1) prod p^{r-1}(p+1) as numerator/denominator
struct Frac {
    long num, den;
};
inline Frac eichler_mass(long D, long M) {
    long num = 1, den = 12;
    for (long p = 2; p <= D; ++p)
        if (D % p == 0) {
            bool prime = true;
            for (long q = 2; q * q <= p; ++q) prime = prime && p % q;
            if (prime) num *= p - 1;
        }
    long m = M;
    for (long p = 2; p <= m; ++p) {
        if (m % p) continue;
        long r = 0;
        while (m % p == 0) {
            m /= p;
            ++r;
        }
        long pr = 1;
        for (long k = 1; k < r; ++k) pr *= p;
        num *= pr * (p + 1);
    }
    long g = gcd(num, den);
    return {num / g, den / g};
}

}  // namespace oracle
