#pragma once
// Dense univariate polynomials over an exact or floating scalar ring.
// Invariant: coefficient vector has no trailing zeros; the zero polynomial is {}.

#include <algorithm>
#include <cassert>
#include <sstream>
#include <vector>

#include "types.hpp"

namespace flowpoly {

template <class T>
struct Poly {
    std::vector<T> c;  // c[i] multiplies Q^i

    Poly() = default;
    explicit Poly(std::vector<T> v) : c(std::move(v)) { trim(); }
    explicit Poly(T v) { if (!(v == T(0))) c.push_back(std::move(v)); }  // constant polynomial
    static Poly constant(T v) {
        Poly p;
        if (!(v == T(0))) p.c.push_back(std::move(v));
        return p;
    }
    static Poly monomial(T v, size_t deg) {
        Poly p;
        if (!(v == T(0))) { p.c.assign(deg + 1, T(0)); p.c[deg] = std::move(v); }
        return p;
    }

    void trim() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    // degree of the zero polynomial is -1 by convention
    long degree() const { return static_cast<long>(c.size()) - 1; }
    T coeff(size_t i) const { return i < c.size() ? c[i] : T(0); }
    T leading() const { return c.empty() ? T(0) : c.back(); }

    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly& operator+=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator-(Poly a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Poly r;
        r.c.assign(a.c.size() + b.c.size() - 1, T(0));
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == T(0)) continue;
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        }
        r.trim();
        return r;
    }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly& operator*=(const T& s) {
        for (auto& x : c) x *= s;
        trim();
        return *this;
    }
    friend Poly operator*(Poly a, const T& s) { a *= s; return a; }

    template <class S>
    S eval(const S& q) const {  // Horner
        S acc(0);
        for (size_t i = c.size(); i-- > 0;) acc = acc * q + S(c[i]);
        return acc;
    }

    Poly derivative() const {
        Poly r;
        if (c.size() < 2) return r;
        r.c.resize(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * T(static_cast<long>(i));
        return r;
    }

    Poly pow(unsigned n) const {
        Poly r = constant(T(1));
        Poly base = *this;
        while (n) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return r;
    }

    // exact division; asserts zero remainder (field scalar required)
    Poly divexact(const Poly& d) const {
        auto [q, r] = divmod(d);
        assert(r.is_zero());
        (void)r;
        return q;
    }

    // quotient and remainder (field scalar)
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        assert(!d.is_zero());
        Poly rem = *this, q;
        while (!rem.is_zero() && rem.c.size() >= d.c.size()) {
            size_t shift = rem.c.size() - d.c.size();
            T f = rem.leading() / d.leading();
            if (q.c.size() < shift + 1) q.c.resize(shift + 1, T(0));
            q.c[shift] += f;
            for (size_t j = 0; j < d.c.size(); ++j) rem.c[shift + j] -= f * d.c[j];
            rem.trim();
        }
        q.trim();
        return {q, rem};
    }

    std::string str(const char* var = "Q") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c.size(); i-- > 0;) {
            if (c[i] == T(0)) continue;
            if (!first) os << " + ";
            os << c[i];
            if (i > 0) os << "*" << var;
            if (i > 1) os << "^" << i;
            first = false;
        }
        return os.str();
    }
};

using PolyR = Poly<Rat>;
using PolyZ = Poly<Int>;

inline PolyR Q_var() { return PolyR::monomial(Rat(1), 1); }
inline PolyR Q_shift(const Rat& a) {  // Q + a
    PolyR p;
    p.c = {a, Rat(1)};
    p.trim();
    return p;
}

inline PolyZ to_integer_poly(const PolyR& p) {  // asserts all denominators are 1
    PolyZ r;
    r.c.reserve(p.c.size());
    for (auto& x : p.c) {
        assert(den(x) == 1);
        r.c.push_back(num(x));
    }
    return r;
}

inline PolyR to_rational_poly(const PolyZ& p) {
    PolyR r;
    r.c.reserve(p.c.size());
    for (auto& x : p.c) r.c.push_back(Rat(x));
    return r;
}

template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
    return a.divmod(b);
}

template <class T>
Poly<T> divexact(const Poly<T>& a, const Poly<T>& b) {
    return a.divexact(b);
}

// gcd over a field scalar (monic result)
template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        T lead = a.leading();
        for (auto& x : a.c) x = x / lead;
    }
    return a;
}

}  // namespace flowpoly
