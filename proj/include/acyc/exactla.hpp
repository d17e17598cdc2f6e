#pragma once
// Exact linear algebra over Z, Q, F_p and Z/m.
//
// Matrices carry integer entries; a rational matrix is passed by clearing
// denominators (column spans, kernels and solvability are unchanged). A
// submodule of R^n is stored by a canonical generator matrix:
//   Z    column HNF (see detail::column_hnf)
//   Q    reduced column echelon form, each column scaled to a primitive
//        integer vector with positive pivot
//   F_p  reduced column echelon form with entries in [0, p)
//   Z/m  column HNF of the preimage lattice in Z^n (it contains m Z^n)
// so equality of canonical matrices is equality of submodules.

#include "acyc/detail/field_kernels.hpp"
#include "acyc/detail/zkernels.hpp"
#include "acyc/matrix.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc::la {

struct ExactMatrix {
    Ring ring;
    IntMatrix entries;
};

struct HermiteForm {
    RatMatrix H;
    RatMatrix U;
    std::vector<std::size_t> pivot_rows;
    std::size_t rank() const { return pivot_rows.size(); }
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail_la {

    inline IntMatrix scaled_identity(std::size_t n, long m)
    {
        IntMatrix id(n, n);
        for (std::size_t i = 0; i < n; ++i)
            id(i, i) = m;
        return id;
    }

    inline IntMatrix primitive_columns(const RatMatrix& a, std::size_t ncols)
    {
        IntMatrix out(a.rows(), ncols);
        for (std::size_t j = 0; j < ncols; ++j) {
            Integer l = 1;
            for (std::size_t i = 0; i < a.rows(); ++i)
                if (sgn(a(i, j)) != 0)
                    l = lcm(l, Integer(a(i, j).get_den()));
            Integer g = 0;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                Rational v = a(i, j) * l;
                out(i, j) = v.get_num();
                g = gcd(g, out(i, j));
            }
            if (g > 1)
                for (std::size_t i = 0; i < a.rows(); ++i)
                    out(i, j) /= g;
        }
        return out;
    }

    struct ZHermite {
        IntMatrix H;
        IntMatrix U;
        std::vector<std::size_t> pivots;
    };

    inline ZHermite hermite_z(const IntMatrix& m, bool with_u)
    {
        return acyc::detail::with_overflow_fallback([&](auto tag) {
            using T = decltype(tag);
            auto a = acyc::detail::convert_matrix<T>(m);
            Matrix<T> u;
            if (with_u)
                u = Matrix<T>::identity(m.cols());
            auto piv = acyc::detail::column_hnf(a, with_u ? &u : nullptr);
            ZHermite out{acyc::detail::back_to_integer(a), IntMatrix(), piv};
            if (with_u)
                out.U = acyc::detail::back_to_integer(u);
            return out;
        });
    }

    template <class Ops>
    struct FieldHermite {
        Matrix<typename Ops::value_type> H, U;
        std::vector<std::size_t> pivots;
    };

    template <class Ops>
    FieldHermite<Ops> hermite_field(const Ops& f, const IntMatrix& m, bool with_u)
    {
        FieldHermite<Ops> out;
        out.H = acyc::detail::reduce_matrix(f, m);
        if (with_u) {
            out.U = Matrix<typename Ops::value_type>(m.cols(), m.cols());
            for (std::size_t i = 0; i < m.cols(); ++i)
                out.U(i, i) = typename Ops::value_type(1);
        }
        out.pivots = acyc::detail::column_rref(f, out.H, with_u ? &out.U : nullptr);
        return out;
    }

    inline IntMatrix fp_to_int(const Matrix<std::int64_t>& m, std::size_t ncols)
    {
        IntMatrix out(m.rows(), ncols);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < ncols; ++j)
                out(i, j) = Integer(static_cast<long>(m(i, j)));
        return out;
    }

    inline IntMatrix drop_trailing_zero_columns(const IntMatrix& h, std::size_t rank)
    {
        return h.leading_columns(rank);
    }

    inline void require_ring_for_forms(const Ring& r)
    {
        if (r.kind == RingKind::Zm)
            throw RingError("Hermite/echelon forms need Z or a field, got " + r.name());
    }

} // namespace detail_la

/// Canonical column HNF of the Z-span of the columns of m (zero columns dropped).
inline IntMatrix hnf_basis(const IntMatrix& m)
{
    auto h = detail_la::hermite_z(m, false);
    return h.H.leading_columns(h.pivots.size());
}

inline HermiteForm hermite_form(const ExactMatrix& m)
{
    using namespace detail_la;
    const Ring& r = m.ring;
    require_ring_for_forms(r);
    HermiteForm out;
    if (r.kind == RingKind::Z) {
        auto h = hermite_z(m.entries, true);
        out.H = to_rat(h.H);
        out.U = to_rat(h.U);
        out.pivot_rows = h.pivots;
    } else if (r.kind == RingKind::Fp) {
        acyc::detail::FpOps f{r.modulus};
        auto h = hermite_field(f, m.entries, true);
        out.H = to_rat(fp_to_int(h.H, h.H.cols()));
        out.U = to_rat(fp_to_int(h.U, h.U.cols()));
        out.pivot_rows = h.pivots;
    } else {
        acyc::detail::QOps f;
        auto h = hermite_field(f, m.entries, true);
        out.H = h.H;
        out.U = h.U;
        out.pivot_rows = h.pivots;
    }
    return out;
}

/// Elementary divisors d_1 | d_2 | ... of an integer matrix, min(rows, cols)
/// of them, zeros last.
inline std::vector<Integer> smith_form(const IntMatrix& m)
{
    auto divs = acyc::detail::with_overflow_fallback([&](auto tag) {
        using T = decltype(tag);
        auto d = acyc::detail::smith_divisors(acyc::detail::convert_matrix<T>(m));
        std::vector<Integer> out;
        for (auto& x : d)
            out.push_back(acyc::detail::to_integer(x));
        return out;
    });
    std::sort(divs.begin(), divs.end());
    divs.resize(std::min(m.rows(), m.cols()), Integer(0));
    return divs;
}

inline std::vector<Integer> smith_form(const ExactMatrix& m)
{
    if (m.ring.kind != RingKind::Z)
        throw RingError("Smith form is computed over Z, got " + m.ring.name());
    return smith_form(m.entries);
}

/// Rank over Z/Q (rational rank) or F_p.
inline std::size_t rank(const IntMatrix& m, const Ring& r = Ring::integers())
{
    if (m.empty())
        return 0;
    switch (r.kind) {
    case RingKind::Fp:
        return acyc::detail::field_rank(acyc::detail::FpOps{r.modulus}, m);
    case RingKind::Z:
    case RingKind::Q: {
        auto d = smith_form(m);
        return static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](const Integer& x) { return x != 0; }));
    }
    case RingKind::Zm:
        throw RingError("rank is not defined over " + r.name());
    }
    return 0;
}

/// Order of the image of m over Z/m: prod m / gcd(m, d_i).
inline Integer image_order_mod(const IntMatrix& mat, long m)
{
    Integer order = 1;
    Integer mm(m);
    for (auto& d : smith_form(mat)) {
        if (d == 0)
            continue;
        order *= mm / gcd(mm, d);
    }
    return order;
}

inline IntMatrix canonical_span(const Ring& r, const IntMatrix& gens)
{
    using namespace detail_la;
    const std::size_t n = gens.rows();
    switch (r.kind) {
    case RingKind::Z:
        return hnf_basis(gens);
    case RingKind::Zm:
        return hnf_basis(hconcat(gens, scaled_identity(n, r.modulus)));
    case RingKind::Fp: {
        acyc::detail::FpOps f{r.modulus};
        auto h = hermite_field(f, gens, false);
        return fp_to_int(h.H, h.pivots.size());
    }
    case RingKind::Q: {
        acyc::detail::QOps f;
        auto h = hermite_field(f, gens, false);
        return primitive_columns(h.H, h.pivots.size());
    }
    }
    return {};
}

/// Basis of ker(M) as columns, in canonical form for the ring. Over Z the
/// basis spans the saturated kernel; over Z/m it generates the preimage
/// lattice {x in Z^n : Mx = 0 mod m}.
inline IntMatrix kernel_basis(const ExactMatrix& m)
{
    using namespace detail_la;
    const Ring& r = m.ring;
    const std::size_t n = m.entries.cols();
    switch (r.kind) {
    case RingKind::Z: {
        auto h = hermite_z(m.entries, true);
        std::vector<std::size_t> idx;
        for (std::size_t j = h.pivots.size(); j < n; ++j)
            idx.push_back(j);
        if (idx.empty())
            return IntMatrix(n, 0);
        return hnf_basis(h.U.select_columns(idx));
    }
    case RingKind::Zm: {
        auto aug = hconcat(m.entries, scaled_identity(m.entries.rows(), r.modulus));
        auto k = kernel_basis(ExactMatrix{Ring::integers(), aug});
        std::vector<std::size_t> top(n);
        std::iota(top.begin(), top.end(), 0);
        return hnf_basis(k.select_rows(top));
    }
    case RingKind::Fp: {
        acyc::detail::FpOps f{r.modulus};
        auto h = hermite_field(f, m.entries, true);
        std::vector<std::size_t> idx;
        for (std::size_t j = h.pivots.size(); j < n; ++j)
            idx.push_back(j);
        if (idx.empty())
            return IntMatrix(n, 0);
        return canonical_span(r, fp_to_int(h.U.select_columns(idx), idx.size()));
    }
    case RingKind::Q: {
        acyc::detail::QOps f;
        auto h = hermite_field(f, m.entries, true);
        std::vector<std::size_t> idx;
        for (std::size_t j = h.pivots.size(); j < n; ++j)
            idx.push_back(j);
        if (idx.empty())
            return IntMatrix(n, 0);
        return canonical_span(r, primitive_columns(h.U.select_columns(idx), idx.size()));
    }
    }
    return {};
}

/// Deterministic x with Mx = b (free parameters zero), or nullopt when b is
/// not in the image. Over Z/m and F_p the answer is reduced into [0, m).
inline std::optional<RatVector> solve_in_image(const ExactMatrix& m, const RatVector& b)
{
    using namespace detail_la;
    const Ring& r = m.ring;
    const auto& a = m.entries;
    if (b.size() != a.rows())
        throw DimensionError("right-hand side length mismatch");
    const std::size_t n = a.cols();

    auto integral_rhs = [&]() -> std::optional<IntVector> {
        IntVector out(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b[i].get_den() != 1)
                return std::nullopt;
            out[i] = b[i].get_num();
        }
        return out;
    };

    switch (r.kind) {
    case RingKind::Z: {
        auto bi = integral_rhs();
        if (!bi)
            return std::nullopt;
        auto h = hermite_z(a, true);
        IntVector y(n, Integer(0));
        for (std::size_t j = 0; j < h.pivots.size(); ++j) {
            const std::size_t row = h.pivots[j];
            Integer acc = (*bi)[row];
            for (std::size_t jj = 0; jj < j; ++jj)
                acc -= h.H(row, jj) * y[jj];
            if (!acyc::detail::divides(h.H(row, j), acc))
                return std::nullopt;
            y[j] = acc / h.H(row, j);
        }
        if (h.H * y != *bi)
            return std::nullopt;
        auto x = h.U * y;
        return RatVector(x.begin(), x.end());
    }
    case RingKind::Zm: {
        auto bi = integral_rhs();
        if (!bi)
            return std::nullopt;
        auto aug = hconcat(a, scaled_identity(a.rows(), r.modulus));
        auto sol = solve_in_image(ExactMatrix{Ring::integers(), aug}, b);
        if (!sol)
            return std::nullopt;
        RatVector x(n);
        for (std::size_t j = 0; j < n; ++j)
            x[j] = mod_floor((*sol)[j].get_num(), Integer(r.modulus));
        return x;
    }
    case RingKind::Fp: {
        acyc::detail::FpOps f{r.modulus};
        auto bi = integral_rhs();
        if (!bi)
            return std::nullopt;
        auto h = hermite_field(f, a, true);
        std::vector<std::int64_t> y(n, 0);
        for (std::size_t j = 0; j < h.pivots.size(); ++j)
            y[j] = f.reduce((*bi)[h.pivots[j]]);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < h.pivots.size(); ++j)
                acc = f.add(acc, f.mul(h.H(i, j), y[j]));
            if (acc != f.reduce((*bi)[i]))
                return std::nullopt;
        }
        RatVector x(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < n; ++j)
                acc = f.add(acc, f.mul(h.U(i, j), y[j]));
            x[i] = Rational(static_cast<long>(acc));
        }
        return x;
    }
    case RingKind::Q: {
        acyc::detail::QOps f;
        auto h = hermite_field(f, a, true);
        RatVector y(n, Rational(0));
        for (std::size_t j = 0; j < h.pivots.size(); ++j)
            y[j] = b[h.pivots[j]];
        if (h.H * y != b)
            return std::nullopt;
        return h.U * y;
    }
    }
    return std::nullopt;
}

/// A submodule of R^n held in canonical form.
class Submodule {
public:
    Submodule() = default;

    static Submodule span(const Ring& r, const IntMatrix& gens)
    {
        Submodule s;
        s.ring_ = r;
        s.n_ = gens.rows();
        s.basis_ = canonical_span(r, gens);
        return s;
    }

    static Submodule zero(const Ring& r, std::size_t n) { return span(r, IntMatrix(n, 0)); }
    static Submodule whole(const Ring& r, std::size_t n) { return span(r, IntMatrix::identity(n)); }

    const Ring& ring() const { return ring_; }
    std::size_t ambient() const { return n_; }
    const IntMatrix& basis() const { return basis_; }

    bool contains(const IntVector& v) const
    {
        if (v.size() != n_)
            throw DimensionError("membership vector length mismatch");
        RatVector b(v.begin(), v.end());
        return solve_in_image(ExactMatrix{solve_ring(), basis_}, b).has_value();
    }

    Submodule sum(const Submodule& o) const
    {
        check_compatible(o);
        return span(ring_, hconcat(basis_, o.basis_));
    }

    Submodule intersect(const Submodule& o) const
    {
        check_compatible(o);
        if (basis_.cols() == 0 || o.basis_.cols() == 0)
            return zero(ring_, n_);
        IntMatrix negb = o.basis_;
        for (auto& x : negb.data())
            x = -x;
        auto aug = hconcat(basis_, negb);
        auto k = kernel_basis(ExactMatrix{solve_ring(), aug});
        std::vector<std::size_t> top(basis_.cols());
        std::iota(top.begin(), top.end(), 0);
        return span(ring_, basis_ * k.select_rows(top));
    }

    bool contains(const Submodule& o) const
    {
        check_compatible(o);
        for (std::size_t j = 0; j < o.basis_.cols(); ++j)
            if (!contains(o.basis_.column(j)))
                return false;
        return true;
    }

    /// Invariant factors of R^n / this, over Z and Z/m (entries > 1; free
    /// summands show up as 0 over Z and as m over Z/m).
    std::vector<Integer> quotient_invariants() const
    {
        if (ring_.is_field())
            throw RingError("quotient invariants are for Z and Z/m");
        auto d = smith_form(basis_);
        std::vector<Integer> out;
        for (std::size_t i = 0; i < n_; ++i) {
            Integer x = i < d.size() ? d[i] : Integer(0);
            if (x != 1)
                out.push_back(x);
        }
        return out;
    }

    bool quotient_is_free() const
    {
        if (ring_.is_field())
            return true;
        const Integer top = ring_.kind == RingKind::Z ? Integer(0) : Integer(ring_.modulus);
        for (auto& x : quotient_invariants())
            if (x != top)
                return false;
        return true;
    }

    /// Rank of R^n / this when that quotient is free.
    std::size_t quotient_rank() const
    {
        if (ring_.kind == RingKind::Zm) {
            if (!quotient_is_free())
                throw RingError("quotient over " + ring_.name() + " is not free");
            return quotient_invariants().size();
        }
        return n_ - basis_.cols();
    }

    /// Rank of the submodule itself when it and its quotient are free.
    std::size_t rank() const
    {
        if (ring_.kind == RingKind::Zm)
            return n_ - quotient_rank();
        return basis_.cols();
    }

    friend bool operator==(const Submodule& a, const Submodule& b)
    {
        return a.ring_ == b.ring_ && a.n_ == b.n_ && a.basis_ == b.basis_;
    }

private:
    // Z/m membership and kernels run on the preimage lattice over Z.
    Ring solve_ring() const { return ring_.kind == RingKind::Zm ? Ring::integers() : ring_; }

    void check_compatible(const Submodule& o) const
    {
        if (!(ring_ == o.ring_))
            throw RingError("submodules over different rings");
        if (n_ != o.n_)
            throw DimensionError("submodules of different ambient rank");
    }

    Ring ring_ = Ring::integers();
    std::size_t n_ = 0;
    IntMatrix basis_;
};

enum class SubmoduleMode { intersect, sum, membership, equality };

/// Result of exactness of  C0 --d_in--> C1 --d_out--> C2  at C1.
struct Exactness {
    bool exact = false;
    std::size_t middle_rank = 0;
    std::size_t kernel_rank = 0;  // free rank of ker(d_out) (log_m of its order over Z/m)
    std::size_t image_rank = 0;   // rank of im(d_in)
    std::optional<IntVector> witness;  // kernel element outside the image
};

inline bool composite_is_zero(const IntMatrix& d_out, const IntMatrix& d_in, const Ring& r)
{
    if (d_in.cols() == 0 || d_out.rows() == 0)
        return true;
    auto c = d_out * d_in;
    if (!r.is_finite())
        return c.is_zero();
    const Integer m(r.modulus);
    return std::all_of(c.data().begin(), c.data().end(), [&](const Integer& x) { return mod_floor(x, m) == 0; });
}

namespace detail_la {
    inline std::size_t log_order(Integer order, long m)
    {
        std::size_t e = 0;
        while (order > 1 && order % m == 0) {
            order /= m;
            ++e;
        }
        return e;
    }
} // namespace detail_la

inline Exactness exact_at(const IntMatrix& d_in, const IntMatrix& d_out, const Ring& r, bool want_witness = true)
{
    const std::size_t n1 = d_in.rows() ? d_in.rows() : d_out.cols();
    if (d_in.rows() != n1 || d_out.cols() != n1)
        throw DimensionError("exactness: middle dimensions disagree");
    if (!composite_is_zero(d_out, d_in, r))
        throw InvariantViolation("exactness: consecutive maps do not compose to zero");
    Exactness e;
    e.middle_rank = n1;
    switch (r.kind) {
    case RingKind::Z: {
        auto din = d_in.cols() ? smith_form(d_in) : std::vector<Integer>{};
        std::size_t rin = 0;
        bool saturated = true;
        for (auto& x : din)
            if (x != 0) {
                ++rin;
                saturated = saturated && x == 1;
            }
        std::size_t rout = d_out.rows() ? rank(d_out) : 0;
        e.image_rank = rin;
        e.kernel_rank = n1 - rout;
        e.exact = saturated && rin == e.kernel_rank;
        break;
    }
    case RingKind::Q:
    case RingKind::Fp: {
        e.image_rank = d_in.cols() ? rank(d_in, r) : 0;
        e.kernel_rank = n1 - (d_out.rows() ? rank(d_out, r) : 0);
        e.exact = e.image_rank == e.kernel_rank;
        break;
    }
    case RingKind::Zm: {
        Integer im_in = d_in.cols() ? image_order_mod(d_in, r.modulus) : Integer(1);
        Integer im_out = d_out.rows() ? image_order_mod(d_out, r.modulus) : Integer(1);
        Integer total = ipow(r.modulus, static_cast<int>(n1));
        e.image_rank = detail_la::log_order(im_in, r.modulus);
        e.kernel_rank = detail_la::log_order(total / im_out, r.modulus);
        e.exact = im_in * im_out == total;
        break;
    }
    }
    if (!e.exact && want_witness) {
        IntMatrix dout = d_out.rows() ? d_out : IntMatrix(0, n1);
        auto k = kernel_basis(ExactMatrix{r, dout});
        ExactMatrix img{r, d_in.cols() ? d_in : IntMatrix(n1, 0)};
        for (std::size_t j = 0; j < k.cols(); ++j) {
            auto v = k.column(j);
            RatVector b(v.begin(), v.end());
            if (!solve_in_image(img, b)) {
                e.witness = v;
                break;
            }
        }
    }
    return e;
}

/// Free modules C_0..C_m with maps between consecutive degrees.
///   chain:   maps[i] : C_{i+1} -> C_i,   shape n_i x n_{i+1}
///   cochain: maps[i] : C^i -> C^{i+1},   shape n_{i+1} x n_i
struct ChainComplexData {
    Ring ring = Ring::integers();
    bool cochain = false;
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> maps;
    std::vector<std::vector<std::string>> labels;

    void validate() const
    {
        if (maps.size() + 1 != ranks.size() && !(ranks.empty() && maps.empty()))
            throw DimensionError("complex needs one map between consecutive degrees");
        for (std::size_t i = 0; i < maps.size(); ++i) {
            std::size_t want_r = cochain ? ranks[i + 1] : ranks[i];
            std::size_t want_c = cochain ? ranks[i] : ranks[i + 1];
            if (maps[i].rows() != want_r || maps[i].cols() != want_c)
                throw DimensionError("map " + std::to_string(i) + " has the wrong shape");
        }
        for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
            const IntMatrix& first = cochain ? maps[i] : maps[i + 1];
            const IntMatrix& second = cochain ? maps[i + 1] : maps[i];
            if (!composite_is_zero(second, first, ring))
                throw InvariantViolation("composite of maps " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                         " is nonzero");
        }
    }

    /// Map into degree k (zero matrix at the ends).
    IntMatrix incoming(std::size_t k) const
    {
        if (cochain)
            return k == 0 ? IntMatrix(ranks[0], 0) : maps[k - 1];
        return k + 1 < ranks.size() ? maps[k] : IntMatrix(ranks[k], 0);
    }
    IntMatrix outgoing(std::size_t k) const
    {
        if (cochain)
            return k + 1 < ranks.size() ? maps[k] : IntMatrix(0, ranks[k]);
        return k == 0 ? IntMatrix(0, ranks[0]) : maps[k - 1];
    }
};

struct HomologyGroup {
    std::size_t rank = 0;
    std::vector<Integer> torsion;
    bool is_zero() const { return rank == 0 && torsion.empty(); }
};

inline HomologyGroup homology(const ChainComplexData& c, std::size_t k)
{
    c.validate();
    if (k >= c.ranks.size())
        return {};
    const std::size_t n = c.ranks[k];
    IntMatrix in = c.incoming(k);
    IntMatrix out = c.outgoing(k);
    HomologyGroup h;
    switch (c.ring.kind) {
    case RingKind::Z: {
        std::size_t rin = 0;
        for (auto& d : in.cols() ? smith_form(in) : std::vector<Integer>{}) {
            if (d == 0)
                continue;
            ++rin;
            if (d != 1)
                h.torsion.push_back(d);
        }
        std::size_t rout = out.rows() ? rank(out) : 0;
        h.rank = n - rin - rout;
        break;
    }
    case RingKind::Q:
    case RingKind::Fp:
        h.rank = n - (in.cols() ? rank(in, c.ring) : 0) - (out.rows() ? rank(out, c.ring) : 0);
        break;
    case RingKind::Zm: {
        // H = K / I with K, I the preimage lattices of ker(out) and im(in).
        auto kb = kernel_basis(ExactMatrix{c.ring, out.rows() ? out : IntMatrix(0, n)});
        auto ib = canonical_span(c.ring, in);
        IntMatrix coords(kb.cols(), ib.cols());
        for (std::size_t j = 0; j < ib.cols(); ++j) {
            auto col = ib.column(j);
            auto x = solve_in_image(ExactMatrix{Ring::integers(), kb}, RatVector(col.begin(), col.end()));
            if (!x)
                throw InvariantViolation("image not contained in kernel");
            for (std::size_t i = 0; i < kb.cols(); ++i)
                coords(i, j) = (*x)[i].get_num();
        }
        for (auto& d : smith_form(coords)) {
            if (d == 1)
                continue;
            if (d == c.ring.modulus)
                ++h.rank;
            else
                h.torsion.push_back(d);
        }
        break;
    }
    }
    return h;
}

} // namespace acyc::la
