#pragma once
// Column echelon elimination over F_p and Q.

#include "acyc/matrix.hpp"

#include <cstdint>
#include <vector>

namespace acyc::detail {

struct FpOps {
    std::int64_t p;
    using value_type = std::int64_t;
    value_type reduce(const Integer& x) const
    {
        Integer r = mod_floor(x, Integer(static_cast<long>(p)));
        return r.get_si();
    }
    Integer lift(value_type x) const { return Integer(static_cast<long>(x)); }
    value_type add(value_type a, value_type b) const { return (a + b) % p; }
    value_type sub(value_type a, value_type b) const { return ((a - b) % p + p) % p; }
    value_type mul(value_type a, value_type b) const { return static_cast<value_type>((static_cast<__int128>(a) * b) % p); }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type inv(value_type a) const
    {
        // a^(p-2)
        value_type r = 1, b = a;
        std::int64_t e = p - 2;
        while (e > 0) {
            if (e & 1)
                r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
    bool zero(value_type a) const { return a == 0; }
};

struct QOps {
    using value_type = Rational;
    value_type reduce(const Integer& x) const { return Rational(x); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type inv(const value_type& a) const { return 1 / a; }
    bool zero(const value_type& a) const { return sgn(a) == 0; }
};

/// Reduced column echelon form over a field in place: pivot columns [0, rank)
/// have a 1 at increasing pivot rows and all other columns vanish in those
/// rows. Column operations are mirrored on `u` when given.
template <class Ops>
std::vector<std::size_t> column_rref(const Ops& f, Matrix<typename Ops::value_type>& a,
                                     Matrix<typename Ops::value_type>* u)
{
    using V = typename Ops::value_type;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    auto scale = [&](Matrix<V>& x, std::size_t j, const V& s) {
        for (std::size_t i = 0; i < x.rows(); ++i)
            if (!f.zero(x(i, j)))
                x(i, j) = f.mul(x(i, j), s);
    };
    auto axpy = [&](Matrix<V>& x, std::size_t dst, std::size_t src, const V& q) {
        for (std::size_t i = 0; i < x.rows(); ++i)
            if (!f.zero(x(i, src)))
                x(i, dst) = f.sub(x(i, dst), f.mul(q, x(i, src)));
    };
    for (std::size_t i = 0; i < m && r < n; ++i) {
        std::size_t piv = n;
        for (std::size_t j = r; j < n; ++j)
            if (!f.zero(a(i, j))) {
                piv = j;
                break;
            }
        if (piv == n)
            continue;
        a.swap_columns(r, piv);
        if (u)
            u->swap_columns(r, piv);
        V s = f.inv(a(i, r));
        scale(a, r, s);
        if (u)
            scale(*u, r, s);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == r || f.zero(a(i, j)))
                continue;
            V q = a(i, j);
            axpy(a, j, r, q);
            if (u)
                axpy(*u, j, r, q);
        }
        pivots.push_back(i);
        ++r;
    }
    return pivots;
}

template <class Ops>
Matrix<typename Ops::value_type> reduce_matrix(const Ops& f, const IntMatrix& m)
{
    Matrix<typename Ops::value_type> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i)
        out.data()[i] = f.reduce(m.data()[i]);
    return out;
}

template <class Ops>
std::size_t field_rank(const Ops& f, const IntMatrix& m)
{
    auto a = reduce_matrix(f, m);
    // Row-style elimination is cheaper for wide matrices; rank is symmetric.
    if (a.cols() > a.rows())
        a = a.transpose();
    return column_rref(f, a, static_cast<decltype(a)*>(nullptr)).size();
}

} // namespace acyc::detail
