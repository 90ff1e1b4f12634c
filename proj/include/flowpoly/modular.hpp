#pragma once
// 64-bit modular arithmetic, deterministic primality, prime streams and
// Chinese-remainder reconstruction with a surplus-prime checksum.

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace flowpoly {

struct BadPrimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline uint64_t addmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    a %= m;
    b %= m;
    uint64_t s = a + b;  // a,b < m <= 2^63 so no overflow for our prime sizes
    return s >= m ? s - m : s;
}

inline uint64_t submod_u64(uint64_t a, uint64_t b, uint64_t m) {
    a %= m;
    b %= m;
    return a >= b ? a - b : a + (m - b);
}

inline uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// deterministic Miller–Rabin; the witness set below is proven complete for
// all n < 3.3e24, far beyond 64 bits
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline uint64_t prev_prime_u64(uint64_t n) {
    if (n < 2) throw std::invalid_argument("prev_prime_u64: no prime below 2");
    for (uint64_t c = n;; --c) {
        if (is_prime_u64(c)) return c;
        if (c == 2) throw std::invalid_argument("prev_prime_u64: exhausted");
    }
}

inline uint64_t invmod_u64(uint64_t a, uint64_t m) {
    int64_t t = 0, nt = 1;
    int64_t r = static_cast<int64_t>(m), nr = static_cast<int64_t>(a % m);
    while (nr != 0) {
        int64_t q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw BadPrimeError("invmod_u64: not invertible");
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

// value mod p mapped into [0, p)
inline uint64_t mod_of_int(const Int& v, uint64_t p) {
    Int r = v % Int(p);
    if (r < 0) r += Int(p);
    return r.convert_to<uint64_t>();
}

inline uint64_t mod_of_rat(const Rat& v, uint64_t p) {
    uint64_t d = mod_of_int(den(v), p);
    if (d == 0) throw BadPrimeError("mod_of_rat: denominator divisible by p");
    return mulmod_u64(mod_of_int(num(v), p), invmod_u64(d, p), p);
}

// all primes <= limit (default: largest 16-bit prime budget), descending
inline std::vector<uint32_t> primes_descending(uint32_t limit = 65521) {
    std::vector<bool> comp(limit + 1, false);
    std::vector<uint32_t> out;
    for (uint32_t i = 2; i <= limit; ++i) {
        if (!comp[i])
            for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) comp[j] = true;
    }
    for (uint32_t i = limit; i >= 2; --i)
        if (!comp[i]) out.push_back(i);
    return out;
}

// Incremental CRT over all pairs except the last, returning the symmetric
// lift in (-M/2, M/2]; the final pair is a surplus checksum and a mismatch
// throws (it means the prime budget overflowed).
inline Int crt_reconstruct(const std::vector<std::pair<uint64_t, uint64_t>>& prime_residues) {
    if (prime_residues.size() < 2)
        throw std::invalid_argument("crt_reconstruct: need at least one base prime plus the surplus prime");
    size_t nbase = prime_residues.size() - 1;
    Int x = Int(prime_residues[0].second);
    Int m = Int(prime_residues[0].first);
    for (size_t i = 1; i < nbase; ++i) {
        uint64_t p = prime_residues[i].first;
        uint64_t r = prime_residues[i].second;
        // x' = x + m * t with t = (r - x) / m (mod p)
        uint64_t xm = mod_of_int(x, p);
        uint64_t t = mulmod_u64(submod_u64(r, xm, p), invmod_u64(mod_of_int(m, p), p), p);
        x += m * Int(t);
        m *= Int(p);
    }
    if (x > m / 2) x -= m;  // symmetric lift into (-M/2, M/2]
    uint64_t ps = prime_residues[nbase].first;
    if (mod_of_int(x, ps) != prime_residues[nbase].second % ps) {
        std::ostringstream os;
        os << "crt_reconstruct: surplus prime " << ps << " disagrees (prime budget overflow)";
        throw std::runtime_error(os.str());
    }
    return x;
}

}  // namespace flowpoly
