#pragma once
// Free exterior algebra on a finite ordered set {0, ..., n-1}, monomials as
// bitmasks (e_S is the wedge in increasing index order), and the degree -1
// derivation delta with delta(e_i) = 1.

#include "acyc/matrix.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc::ext {

using MonoMask = std::uint64_t;

inline int degree(MonoMask s) { return std::popcount(s); }

inline std::string mono_str(MonoMask s)
{
    if (s == 0)
        return "1";
    std::string out = "e{";
    bool first = true;
    for (int i = 0; i < 64; ++i)
        if (s >> i & 1) {
            out += (first ? "" : ",") + std::to_string(i);
            first = false;
        }
    return out + "}";
}

/// Sign of e_S ^ e_T = sign * e_{S u T} for disjoint S, T.
inline int wedge_sign(MonoMask s, MonoMask t)
{
    int inv = 0;
    for (MonoMask rest = t; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        MonoMask above = j + 1 >= 64 ? 0 : (s >> (j + 1));
        inv += std::popcount(above);
    }
    return inv % 2 ? -1 : 1;
}

class ExtElement {
public:
    explicit ExtElement(Ring r = Ring::integers()) : ring_(r) {}

    static ExtElement monomial(const Ring& r, MonoMask s, const Rational& c = 1)
    {
        ExtElement e(r);
        e.add_term(s, c);
        return e;
    }
    static ExtElement one(const Ring& r) { return monomial(r, 0); }
    static ExtElement generator(const Ring& r, int i) { return monomial(r, MonoMask(1) << i); }

    const Ring& ring() const { return ring_; }
    const std::map<MonoMask, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(MonoMask s) const
    {
        auto it = terms_.find(s);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(MonoMask s, const Rational& c)
    {
        Rational v = reduce_scalar(ring_, coeff(s) + c);
        if (sgn(v) == 0)
            terms_.erase(s);
        else
            terms_[s] = v;
    }

    /// Degree when homogeneous, -1 for zero, throws otherwise.
    int homogeneous_degree() const
    {
        int d = -1;
        for (auto& [s, c] : terms_) {
            if (d >= 0 && degree(s) != d)
                throw std::domain_error("element is not homogeneous");
            d = degree(s);
        }
        return d;
    }

    friend bool operator==(const ExtElement& a, const ExtElement& b)
    {
        return a.ring_ == b.ring_ && a.terms_ == b.terms_;
    }

    ExtElement& operator+=(const ExtElement& o)
    {
        check(o);
        for (auto& [s, c] : o.terms_)
            add_term(s, c);
        return *this;
    }
    ExtElement& operator-=(const ExtElement& o)
    {
        check(o);
        for (auto& [s, c] : o.terms_)
            add_term(s, -c);
        return *this;
    }
    friend ExtElement operator+(ExtElement a, const ExtElement& b) { return a += b; }
    friend ExtElement operator-(ExtElement a, const ExtElement& b) { return a -= b; }
    friend ExtElement operator*(const Rational& c, const ExtElement& a)
    {
        ExtElement out(a.ring_);
        for (auto& [s, x] : a.terms_)
            out.add_term(s, c * x);
        return out;
    }

    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (auto& [s, c] : terms_) {
            if (!out.empty())
                out += c < 0 ? " - " : " + ";
            else if (c < 0)
                out += "-";
            Rational a = abs(c);
            out += (a == 1 ? "" : a.get_str() + "*") + mono_str(s);
        }
        return out;
    }

    void check(const ExtElement& o) const
    {
        if (!(o.ring_ == ring_))
            throw RingError("exterior elements over different rings");
    }

private:
    Ring ring_;
    std::map<MonoMask, Rational> terms_;
};

inline ExtElement wedge(const ExtElement& a, const ExtElement& b)
{
    a.check(b);
    ExtElement out(a.ring());
    for (auto& [s, x] : a.terms())
        for (auto& [t, y] : b.terms()) {
            if (s & t)
                continue;
            out.add_term(s | t, wedge_sign(s, t) * x * y);
        }
    return out;
}

/// delta(e_{s_0} ^ ... ^ e_{s_r}) = sum_i (-1)^i e_{S - s_i}.
inline ExtElement delta(const ExtElement& a)
{
    ExtElement out(a.ring());
    for (auto& [s, x] : a.terms()) {
        int i = 0;
        for (MonoMask rest = s; rest; rest &= rest - 1, ++i) {
            MonoMask bit = rest & (~rest + 1);
            out.add_term(s & ~bit, i % 2 ? -x : x);
        }
    }
    return out;
}

inline ExtElement delta_monomial(const Ring& r, MonoMask s) { return delta(ExtElement::monomial(r, s)); }

/// Monomials of degree q in n letters, increasing as integers.
inline std::vector<MonoMask> monomials(int n, int q)
{
    std::vector<MonoMask> out;
    if (q < 0 || q > n)
        return out;
    for (MonoMask s = 0; s < (MonoMask(1) << n); ++s)
        if (degree(s) == q)
            out.push_back(s);
    return out;
}

/// Coordinates of a homogeneous element in the degree-q monomial basis.
inline IntVector coordinates(const ExtElement& a, const std::vector<MonoMask>& basis)
{
    IntVector v(basis.size(), Integer(0));
    std::map<MonoMask, std::size_t> pos;
    for (std::size_t j = 0; j < basis.size(); ++j)
        pos.emplace(basis[j], j);
    for (auto& [s, c] : a.terms()) {
        auto it = pos.find(s);
        if (it == pos.end())
            throw std::domain_error("term outside the requested degree");
        if (c.get_den() != 1)
            throw std::domain_error("non-integral coefficient");
        v[it->second] = c.get_num();
    }
    return v;
}

/// Matrix of delta from degree q to degree q-1.
inline IntMatrix delta_matrix(int n, int q)
{
    auto src = monomials(n, q), dst = monomials(n, q - 1);
    IntMatrix m(dst.size(), src.size());
    std::map<MonoMask, std::size_t> pos;
    for (std::size_t j = 0; j < dst.size(); ++j)
        pos.emplace(dst[j], j);
    for (std::size_t j = 0; j < src.size(); ++j) {
        int i = 0;
        for (MonoMask rest = src[j]; rest; rest &= rest - 1, ++i) {
            MonoMask bit = rest & (~rest + 1);
            m(pos.at(src[j] & ~bit), j) += i % 2 ? -1 : 1;
        }
    }
    return m;
}

/// Basis of E^q = ker(delta) = im(delta) in degree q: delta(e_0 ^ e_T), T in {1..n-1}, |T| = q.
inline std::vector<ExtElement> subalgebra_E_basis(int n, int q, const Ring& r = Ring::integers())
{
    std::vector<ExtElement> out;
    if (n < 1)
        return out;
    for (auto t : monomials(n - 1, q))
        out.push_back(delta_monomial(r, (t << 1) | 1));
    return out;
}

/// The splitting E[1] -> E~, x -> e_i ^ x.
inline ExtElement split(int i, const ExtElement& x) { return wedge(ExtElement::generator(x.ring(), i), x); }

} // namespace acyc::ext
