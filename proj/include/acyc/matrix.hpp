#pragma once
// Dense matrices and base-ring tags shared by every module.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc {

using Integer = mpz_class;
using Rational = mpq_class;

struct RingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline bool is_prime(long n)
{
    if (n < 2)
        return false;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0)
            return false;
    return true;
}

enum class RingKind { Z, Q, Fp, Zm };

/// Base ring of a module: Z, Q, F_p (p prime) or Z/m.
struct Ring {
    RingKind kind = RingKind::Z;
    long modulus = 0;

    static Ring integers() { return {RingKind::Z, 0}; }
    static Ring rationals() { return {RingKind::Q, 0}; }
    static Ring prime_field(long p)
    {
        if (!is_prime(p))
            throw RingError("F_p requires a prime, got " + std::to_string(p));
        return {RingKind::Fp, p};
    }
    static Ring residues(long m)
    {
        if (m < 2)
            throw RingError("Z/m requires m >= 2");
        if (is_prime(m))
            return prime_field(m);
        return {RingKind::Zm, m};
    }

    /// Parses "Z", "Q", "F2", "F_3", "Z/4".
    static Ring parse(std::string s)
    {
        s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
        if (s == "Z" || s == "ZZ")
            return integers();
        if (s == "Q" || s == "QQ")
            return rationals();
        auto number = [&](std::size_t pos) {
            std::string tail = s.substr(pos);
            if (tail.empty() || !std::all_of(tail.begin(), tail.end(), ::isdigit))
                throw RingError("cannot parse ring '" + s + "'");
            return std::stol(tail);
        };
        if (s.rfind("F_", 0) == 0)
            return prime_field(number(2));
        if (s.rfind("F", 0) == 0)
            return prime_field(number(1));
        if (s.rfind("Z/", 0) == 0)
            return residues(number(2));
        throw RingError("cannot parse ring '" + s + "'");
    }

    bool is_field() const { return kind == RingKind::Q || kind == RingKind::Fp; }
    bool is_finite() const { return kind == RingKind::Fp || kind == RingKind::Zm; }

    std::string name() const
    {
        switch (kind) {
        case RingKind::Z: return "Z";
        case RingKind::Q: return "Q";
        case RingKind::Fp: return "F" + std::to_string(modulus);
        case RingKind::Zm: return "Z/" + std::to_string(modulus);
        }
        return "?";
    }

    friend bool operator==(const Ring&, const Ring&) = default;
};

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (auto& row : init) {
            if (row.size() != cols_)
                throw DimensionError("ragged matrix literal");
            for (auto& x : row)
                data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> column(std::size_t j) const
    {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }

    void swap_columns(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    /// Keeps columns [0, n).
    Matrix leading_columns(std::size_t n) const
    {
        Matrix out(rows_, n);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) = (*this)(i, j);
        return out;
    }

    Matrix select_columns(const std::vector<std::size_t>& idx) const
    {
        Matrix out(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j)
                out(i, j) = (*this)(i, idx[j]);
        return out;
    }

    Matrix select_rows(const std::vector<std::size_t>& idx) const
    {
        Matrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = (*this)(idx[i], j);
        return out;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
    }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m)
    {
        os << '[';
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? ", " : "") << m(i, j);
            os << ']';
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.cols() != b.rows())
        throw DimensionError("matrix product shape mismatch");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& x)
{
    if (a.cols() != x.size())
        throw DimensionError("matrix-vector shape mismatch");
    std::vector<T> y(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0)
                y[i] += a(i, j) * x[j];
    return y;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix difference shape mismatch");
    Matrix<T> c = a;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        c.data()[i] -= b.data()[i];
    return c;
}

/// [A | B]
template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix sum shape mismatch");
    Matrix<T> c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i)
        c.data()[i] += b.data()[i];
    return c;
}

template <class T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.rows() != b.rows())
        throw DimensionError("hconcat row mismatch");
    Matrix<T> c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j)
            c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

template <class T>
Matrix<T> vconcat(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.cols() != b.cols())
        throw DimensionError("vconcat column mismatch");
    Matrix<T> c(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(a.rows() + i, j) = b(i, j);
    return c;
}

template <class T>
Matrix<T> column_matrix(const std::vector<std::vector<T>>& cols, std::size_t rows)
{
    Matrix<T> m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows)
            throw DimensionError("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i)
            m(i, j) = cols[j][i];
    }
    return m;
}

inline Integer mod_floor(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0)
        r += m;
    return r;
}

/// Exponent of p in a nonzero integer.
inline int valuation(Integer a, long p)
{
    if (a == 0)
        throw std::domain_error("valuation of zero");
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

/// Exponent of p in a nonzero rational (may be negative).
inline int valuation(const Rational& a, long p)
{
    return valuation(Integer(a.get_num()), p) - valuation(Integer(a.get_den()), p);
}

inline Integer ipow(long base, int e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
    return r;
}

inline IntMatrix to_int(const RatMatrix& m)
{
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i) {
        if (m.data()[i].get_den() != 1)
            throw std::domain_error("non-integral entry");
        out.data()[i] = m.data()[i].get_num();
    }
    return out;
}

inline RatMatrix to_rat(const IntMatrix& m)
{
    RatMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i)
        out.data()[i] = Rational(m.data()[i]);
    return out;
}

/// Canonical representative of x in the ring (residue in [0, m) for Z/m and F_p).
inline Rational reduce_scalar(const Ring& r, const Rational& x)
{
    switch (r.kind) {
    case RingKind::Q:
        return x;
    case RingKind::Z:
        if (x.get_den() != 1)
            throw std::domain_error("non-integral value over Z");
        return x;
    default: {
        Integer m(r.modulus), inv;
        Integer den = x.get_den();
        if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()))
            throw std::domain_error("denominator not invertible in the ring");
        return Rational(mod_floor(Integer(x.get_num()) * inv, m));
    }
    }
}

} // namespace acyc
