#pragma once
// Integer elimination kernels. Each kernel is instantiated for a checked
// 64-bit scalar first and rerun on GMP integers if an intermediate overflows.

#include "acyc/matrix.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace acyc::detail {

struct Overflow {};

struct I64 {
    std::int64_t v = 0;
    I64() = default;
    I64(std::int64_t x) : v(x) {}
    friend bool operator==(I64 a, I64 b) { return a.v == b.v; }
    friend bool operator==(I64 a, int b) { return a.v == b; }
    friend bool operator<(I64 a, I64 b) { return a.v < b.v; }
};

inline I64 operator+(I64 a, I64 b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a.v, b.v, &r))
        throw Overflow{};
    return r;
}
inline I64 operator-(I64 a, I64 b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a.v, b.v, &r))
        throw Overflow{};
    return r;
}
inline I64 operator*(I64 a, I64 b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a.v, b.v, &r))
        throw Overflow{};
    return r;
}
inline I64 operator-(I64 a)
{
    if (a.v == INT64_MIN)
        throw Overflow{};
    return -a.v;
}

inline bool is_zero(I64 a) { return a.v == 0; }
inline bool is_zero(const Integer& a) { return sgn(a) == 0; }
inline int sign(I64 a) { return (a.v > 0) - (a.v < 0); }
inline int sign(const Integer& a) { return sgn(a); }
inline I64 abs_of(I64 a) { return a.v < 0 ? -a : a; }
inline Integer abs_of(const Integer& a) { return abs(a); }
inline bool abs_less(I64 a, I64 b) { return abs_of(a).v < abs_of(b).v; }
inline bool abs_less(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }
inline bool is_unit(I64 a) { return a.v == 1 || a.v == -1; }
inline bool is_unit(const Integer& a) { return a == 1 || a == -1; }

inline I64 floor_div(I64 a, I64 b)
{
    if (b.v == -1)
        return -a;
    std::int64_t q = a.v / b.v;
    std::int64_t r = a.v % b.v;
    if (r != 0 && ((r < 0) != (b.v < 0)))
        --q;
    return q;
}
inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}
inline bool divides(I64 a, I64 b) { return b.v % a.v == 0; }
inline bool divides(const Integer& a, const Integer& b) { return mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0; }

template <class T>
T from_integer(const Integer& x);
template <>
inline I64 from_integer<I64>(const Integer& x)
{
    if (!x.fits_slong_p())
        throw Overflow{};
    return I64(x.get_si());
}
template <>
inline Integer from_integer<Integer>(const Integer& x)
{
    return x;
}

inline Integer to_integer(I64 x) { return Integer(static_cast<long>(x.v)); }
inline Integer to_integer(const Integer& x) { return x; }

template <class T>
Matrix<T> convert_matrix(const IntMatrix& m)
{
    Matrix<T> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i)
        out.data()[i] = from_integer<T>(m.data()[i]);
    return out;
}

template <class T>
IntMatrix back_to_integer(const Matrix<T>& m)
{
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i)
        out.data()[i] = to_integer(m.data()[i]);
    return out;
}

/// col_dst -= q * col_src over all rows.
template <class T>
void axpy_column(Matrix<T>& a, std::size_t dst, std::size_t src, const T& q, std::size_t from_row = 0)
{
    if (is_zero(q))
        return;
    for (std::size_t i = from_row; i < a.rows(); ++i)
        if (!is_zero(a(i, src)))
            a(i, dst) = a(i, dst) - q * a(i, src);
}

template <class T>
void negate_column(Matrix<T>& a, std::size_t j)
{
    for (std::size_t i = 0; i < a.rows(); ++i)
        a(i, j) = -a(i, j);
}

/// Column Hermite normal form in place: afterwards columns [0, rank) are
/// echelon with strictly increasing pivot rows (first nonzero entry of each
/// column), pivots positive, entries of earlier columns in a pivot row
/// reduced into [0, pivot), and columns [rank, n) are zero. The same column
/// operations are applied to `u` when given. Returns the pivot rows.
template <class T>
std::vector<std::size_t> column_hnf(Matrix<T>& a, Matrix<T>* u)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t i = 0; i < m && r < n; ++i) {
        // Euclid across the row on columns r..n-1.
        for (;;) {
            std::size_t best = n;
            std::size_t nonzero = 0;
            for (std::size_t j = r; j < n; ++j) {
                if (is_zero(a(i, j)))
                    continue;
                ++nonzero;
                if (best == n || abs_less(a(i, j), a(i, best)))
                    best = j;
            }
            if (best == n)
                break;
            a.swap_columns(r, best);
            if (u)
                u->swap_columns(r, best);
            if (nonzero == 1)
                break;
            const T piv = a(i, r);
            for (std::size_t j = r + 1; j < n; ++j) {
                if (is_zero(a(i, j)))
                    continue;
                T q = floor_div(a(i, j), piv);
                axpy_column(a, j, r, q, i);
                if (u)
                    axpy_column(*u, j, r, q);
            }
        }
        if (is_zero(a(i, r)))
            continue;
        if (sign(a(i, r)) < 0) {
            negate_column(a, r);
            if (u)
                negate_column(*u, r);
        }
        const T piv = a(i, r);
        for (std::size_t j = 0; j < r; ++j) {
            T q = floor_div(a(i, j), piv);
            axpy_column(a, j, r, q, i);
            if (u)
                axpy_column(*u, j, r, q);
        }
        pivots.push_back(i);
        ++r;
    }
    return pivots;
}

/// Nonzero elementary divisors (in divisibility order) of a matrix.
template <class T>
std::vector<T> smith_divisors(Matrix<T> a)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<T> out;
    std::size_t t = 0;
    while (t < m && t < n) {
        // Prefer a unit pivot; otherwise the smallest entry.
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m && !(pi < m && is_unit(a(pi, pj))); ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (is_zero(a(i, j)))
                    continue;
                if (pi == m || abs_less(a(i, j), a(pi, pj))) {
                    pi = i;
                    pj = j;
                    if (is_unit(a(i, j)))
                        break;
                }
            }
        if (pi == m)
            break;
        a.swap_rows(t, pi);
        a.swap_columns(t, pj);
        for (;;) {
            bool dirty = false;
            const T piv = a(t, t);
            for (std::size_t i = t + 1; i < m; ++i) {
                if (is_zero(a(i, t)))
                    continue;
                T q = floor_div(a(i, t), piv);
                for (std::size_t j = t; j < n; ++j)
                    if (!is_zero(a(t, j)))
                        a(i, j) = a(i, j) - q * a(t, j);
                if (!is_zero(a(i, t)))
                    dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (is_zero(a(t, j)))
                    continue;
                T q = floor_div(a(t, j), piv);
                for (std::size_t i = t; i < m; ++i)
                    if (!is_zero(a(i, t)))
                        a(i, j) = a(i, j) - q * a(i, t);
                if (!is_zero(a(t, j)))
                    dirty = true;
            }
            if (dirty) {
                // Move the smallest remaining entry of row/column t to the pivot.
                std::size_t bi = t, bj = t;
                for (std::size_t i = t; i < m; ++i)
                    if (!is_zero(a(i, t)) && abs_less(a(i, t), a(bi, bj))) {
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t; j < n; ++j)
                    if (!is_zero(a(t, j)) && abs_less(a(t, j), a(bi, bj))) {
                        bi = t;
                        bj = j;
                    }
                a.swap_rows(t, bi);
                a.swap_columns(t, bj);
                continue;
            }
            // Row and column cleared; enforce divisibility on the remainder.
            bool fixed = false;
            if (!is_unit(piv)) {
                for (std::size_t i = t + 1; i < m && !fixed; ++i)
                    for (std::size_t j = t + 1; j < n; ++j)
                        if (!divides(piv, a(i, j))) {
                            for (std::size_t jj = t; jj < n; ++jj)
                                a(t, jj) = a(t, jj) + a(i, jj);
                            fixed = true;
                            break;
                        }
            }
            if (!fixed)
                break;
        }
        out.push_back(abs_of(a(t, t)));
        ++t;
    }
    return out;
}

/// Runs `fn` on checked 64-bit scalars, falling back to GMP on overflow.
template <class Fn>
auto with_overflow_fallback(Fn&& fn)
{
    try {
        return fn(I64{});
    } catch (const Overflow&) {
        return fn(Integer{});
    }
}

} // namespace acyc::detail
