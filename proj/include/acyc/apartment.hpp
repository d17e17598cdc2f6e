#pragma once
// The Coxeter complex of type A~_d on Z^{d+1} / Z(1,...,1).

#include "acyc/region.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc::apt {

using Mask = std::uint32_t;

struct NotPointed {};

struct Vertex {
    std::vector<long> c;  // min coordinate 0

    std::size_t d() const { return c.size() - 1; }
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t j = 0; j < c.size(); ++j)
            s += (j ? "," : "") + std::to_string(c[j]);
        return s + ")";
    }
};

inline Vertex normalize(std::vector<long> raw)
{
    if (raw.size() < 2)
        throw std::invalid_argument("vertex needs d+1 >= 2 coordinates");
    long m = *std::min_element(raw.begin(), raw.end());
    for (auto& x : raw)
        x -= m;
    return Vertex{std::move(raw)};
}

inline Vertex normalize(std::vector<long> raw, std::size_t d)
{
    if (raw.size() != d + 1)
        throw std::invalid_argument("vertex has " + std::to_string(raw.size()) + " coordinates, expected " +
                                    std::to_string(d + 1));
    return normalize(std::move(raw));
}

inline Vertex operator-(const Vertex& a, const Vertex& b)
{
    std::vector<long> r(a.c.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        r[j] = a.c[j] - b.c[j];
    return normalize(std::move(r));
}

inline Vertex operator+(const Vertex& a, const Vertex& b)
{
    std::vector<long> r(a.c.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        r[j] = a.c[j] + b.c[j];
    return normalize(std::move(r));
}

inline Mask full_mask(std::size_t d) { return (Mask(1) << (d + 1)) - 1; }

/// Class of sum_{j in J} e_j.
inline Vertex indicator(Mask J, std::size_t d)
{
    std::vector<long> r(d + 1, 0);
    for (std::size_t j = 0; j <= d; ++j)
        r[j] = (J >> j) & 1;
    return normalize(std::move(r));
}

/// J with sum_{j in J} e_j representing v, if v is such a class (J proper, nonempty).
inline std::optional<Mask> as_indicator(const Vertex& v)
{
    Mask J = 0;
    for (std::size_t j = 0; j < v.c.size(); ++j) {
        if (v.c[j] > 1)
            return std::nullopt;
        if (v.c[j] == 1)
            J |= Mask(1) << j;
    }
    if (J == 0)
        return std::nullopt;
    return J;
}

inline bool incident(const Vertex& a, const Vertex& b)
{
    return a != b && as_indicator(a - b).has_value();
}

inline int label(const Vertex& v)
{
    long s = 0;
    for (auto x : v.c)
        s += x;
    return static_cast<int>(s % static_cast<long>(v.c.size()));
}

/// Flag chain J_0 < ... < J_{k-1} with sum_{J_t} e_j = x_t - x_k, or nullopt.
inline std::optional<std::vector<Mask>> check_pointed(const std::vector<Vertex>& xs)
{
    if (xs.empty())
        throw std::invalid_argument("empty tuple");
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b)
            if (xs[a] == xs[b])
                throw std::invalid_argument("vertices of a pointed simplex must be distinct");
    const Vertex& last = xs.back();
    std::vector<Mask> chain;
    for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
        auto J = as_indicator(xs[t] - last);
        if (!J)
            return std::nullopt;
        if (!chain.empty() && !((chain.back() & *J) == chain.back() && chain.back() != *J))
            return std::nullopt;
        chain.push_back(*J);
    }
    return chain;
}

inline bool is_pointed(const std::vector<Vertex>& xs) { return check_pointed(xs).has_value(); }

/// Maximal r with a pointed r-simplex from x_0 to x_k: d + 1 - |J_0|.
inline int ell(const std::vector<Vertex>& xs)
{
    auto chain = check_pointed(xs);
    if (!chain)
        throw std::invalid_argument("ell of a non-pointed tuple");
    if (chain->empty())
        return 0;
    return static_cast<int>(xs.front().c.size()) - __builtin_popcount(chain->front());
}

/// N of a pointed (k-1)-simplex (x_1, ..., x_k): z with (z, x_1, ..., x_k) pointed.
inline std::vector<Vertex> neighbor_set_N(const std::vector<Vertex>& eta_hat)
{
    auto chain = check_pointed(eta_hat);
    if (!chain)
        throw std::invalid_argument("N of a non-pointed tuple");
    const std::size_t d = eta_hat.front().d();
    const Mask outer = chain->empty() ? full_mask(d) : chain->front();
    std::vector<Vertex> out;
    for (Mask I = 1; I < full_mask(d); ++I) {
        if ((I & outer) != I || I == outer)
            continue;
        out.push_back(indicator(I, d) + eta_hat.back());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool in_N(const std::vector<Vertex>& eta_hat, const Vertex& z)
{
    for (auto& x : eta_hat)
        if (x == z)
            return false;
    auto t = eta_hat;
    t.insert(t.begin(), z);
    return is_pointed(t);
}

/// [eta | u1, u2]: class of sum over I_1 n I_2, undefined when that is empty.
inline std::optional<Vertex> meet_in_N(const std::vector<Vertex>& eta_hat, const Vertex& u1, const Vertex& u2)
{
    if (!in_N(eta_hat, u1) || !in_N(eta_hat, u2))
        throw std::invalid_argument("meet arguments must lie in N");
    const Vertex& xk = eta_hat.back();
    Mask I = *as_indicator(u1 - xk) & *as_indicator(u2 - xk);
    if (I == 0)
        return std::nullopt;
    return indicator(I, xk.d()) + xk;
}

using Stability = StabilityResult<Vertex>;

inline Stability stability(const std::vector<Vertex>& m0, const std::vector<Vertex>& eta_hat)
{
    for (auto& z : m0)
        if (!in_N(eta_hat, z))
            throw std::invalid_argument("M_0 is not contained in N");
    return stability_with(m0, [&](const Vertex& a, const Vertex& b) { return meet_in_N(eta_hat, a, b); });
}

/// Top d entries of the sorted coordinates of x - z0.
inline IValue i_value(const Vertex& x, const Vertex& z0)
{
    auto y = (x - z0).c;
    std::sort(y.rbegin(), y.rend());
    y.pop_back();
    return y;
}

/// x - e_{supp(x - z0)}, the incident vertex of minimal i.
inline Vertex nu_vertex(const Vertex& x, const Vertex& z0)
{
    if (x == z0)
        throw std::invalid_argument("nu is undefined at z0");
    auto y = (x - z0).c;
    for (auto& v : y)
        if (v > 0)
            --v;
    return normalize(y) + z0;
}

/// Vertex tuple of a region vertex set, by canonical coordinates.
struct ApartmentRegion {
    Region region;
    Vertex z0;
    std::vector<Vertex> vertex;
    std::map<Vertex, std::size_t> id;

    std::optional<std::size_t> find(const Vertex& v) const
    {
        auto it = id.find(v);
        if (it == id.end())
            return std::nullopt;
        return it->second;
    }

    std::vector<Vertex> vertices_of(const Simplex& s) const
    {
        std::vector<Vertex> out;
        for (auto v : s)
            out.push_back(vertex[v]);
        return out;
    }

    /// The region contains the full ball of edge radius r around z0.
    bool contains_ball(long r) const
    {
        IValue all(region.d, r);
        return all <= region.bound;
    }

    IValue i_by_layers(const Vertex& x) const
    {
        auto v = find(x);
        if (!v)
            throw RegionTooSmall("vertex " + x.str() + " is outside the region");
        return region.i_by_layers(
            *v,
            [&](std::size_t a, std::size_t b) {
                auto J = as_indicator(vertex[b] - vertex[a]);
                return J && __builtin_popcount(*J) == 1;
            },
            [&](long r) { return contains_ball(r); });
    }

    /// Meet inside N for region ids; used by stability checks on region data.
    std::optional<std::size_t> meet(const Simplex& eta_hat, std::size_t u1, std::size_t u2) const
    {
        auto m = meet_in_N(vertices_of(eta_hat), vertex[u1], vertex[u2]);
        if (!m)
            return std::nullopt;
        return find(*m);
    }

    Geometry geometry() const
    {
        return {[this](const std::vector<std::size_t>& t) { return is_pointed(vertices_of(t)); },
                [this](const Simplex& e, std::size_t a, std::size_t b) { return meet(e, a, b); }};
    }
};

/// Full subcomplex on {x : i(x) <=_lex B}.
inline ApartmentRegion ball_region(const Vertex& z0, const IValue& bound)
{
    const std::size_t d = z0.d();
    if (bound.size() != d || !is_weakly_decreasing(bound))
        throw std::invalid_argument("bound must be a weakly decreasing d-tuple");
    ApartmentRegion ar;
    ar.z0 = z0;
    Region& r = ar.region;
    r.d = d;
    r.bound = bound;
    const long top = bound.empty() ? 0 : bound[0];
    std::vector<long> y(d + 1, 0);
    std::vector<Vertex> found;
    // Odometer over [0, top]^{d+1} with some zero coordinate.
    for (;;) {
        if (*std::min_element(y.begin(), y.end()) == 0) {
            Vertex v = normalize(y) + z0;
            if (i_value(v, z0) <= bound)
                found.push_back(v);
        }
        std::size_t j = 0;
        while (j <= d && y[j] == top) {
            y[j] = 0;
            ++j;
        }
        if (j > d)
            break;
        ++y[j];
    }
    std::sort(found.begin(), found.end(), [&](const Vertex& a, const Vertex& b) {
        auto ia = i_value(a, z0), ib = i_value(b, z0);
        return ia != ib ? ia < ib : a < b;
    });
    found.erase(std::unique(found.begin(), found.end()), found.end());
    ar.vertex = found;
    for (std::size_t v = 0; v < found.size(); ++v) {
        ar.id.emplace(found[v], v);
        r.ivalue.push_back(i_value(found[v], z0));
        r.label.push_back(label(found[v]));
        r.name.push_back(found[v].str());
    }
    r.z0 = ar.id.at(z0);
    r.adj.assign(found.size(), {});
    for (std::size_t a = 0; a < found.size(); ++a)
        for (Mask J = 1; J < full_mask(d); ++J) {
            auto b = ar.find(found[a] + indicator(J, d));
            if (b) {
                r.adj[a].push_back(*b);
                r.adj[*b].push_back(a);
            }
        }
    for (auto& a : r.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    r.build_simplices();
    return ar;
}

} // namespace acyc::apt
