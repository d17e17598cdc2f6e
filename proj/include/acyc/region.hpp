#pragma once
// Finite full subcomplexes {x : i(x) <= B} shared by the apartment and the
// building. Vertices are dense ids; a simplex is a sorted id vector.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc {

using IValue = std::vector<long>;
using Simplex = std::vector<std::size_t>;

struct RegionTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lexicographic comparison of d-tuples (<0, 0, >0).
inline int lex_compare(const IValue& a, const IValue& b)
{
    if (a < b)
        return -1;
    return a == b ? 0 : 1;
}

inline bool is_weakly_decreasing(const IValue& v)
{
    return std::is_sorted(v.rbegin(), v.rend());
}

template <class T>
struct StabilityResult {
    bool is_stable = false;
    std::optional<std::vector<T>> closure;  // smallest stable superset
};

/// Stability of a vertex set under a partial binary meet.
template <class T, class Meet>
StabilityResult<T> stability_with(std::vector<T> m0, Meet meet)
{
    std::sort(m0.begin(), m0.end());
    m0.erase(std::unique(m0.begin(), m0.end()), m0.end());
    StabilityResult<T> s;
    s.is_stable = true;
    for (std::size_t a = 0; a < m0.size() && s.is_stable; ++a)
        for (std::size_t b = a + 1; b < m0.size(); ++b) {
            auto m = meet(m0[a], m0[b]);
            if (!m || !std::binary_search(m0.begin(), m0.end(), *m)) {
                s.is_stable = false;
                break;
            }
        }
    std::set<T> cl(m0.begin(), m0.end());
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<T> cur(cl.begin(), cl.end());
        for (std::size_t a = 0; a < cur.size(); ++a)
            for (std::size_t b = a + 1; b < cur.size(); ++b) {
                auto m = meet(cur[a], cur[b]);
                if (!m)
                    return s;
                grew = cl.insert(*m).second || grew;
            }
    }
    s.closure = std::vector<T>(cl.begin(), cl.end());
    return s;
}

/// Pointedness and the partial meet on N, by region vertex ids.
struct Geometry {
    std::function<bool(const std::vector<std::size_t>&)> is_pointed;
    std::function<std::optional<std::size_t>(const Simplex&, std::size_t, std::size_t)> meet;
};

struct Region {
    std::size_t d = 0;
    std::size_t z0 = 0;
    IValue bound;
    std::vector<IValue> ivalue;
    std::vector<int> label;
    std::vector<std::string> name;
    std::vector<std::vector<std::size_t>> adj;  // sorted
    std::vector<std::vector<Simplex>> simplices;  // by dimension, sorted

    std::size_t vertex_count() const { return ivalue.size(); }
    std::size_t top_dimension() const { return simplices.empty() ? 0 : simplices.size() - 1; }

    bool incident(std::size_t a, std::size_t b) const
    {
        return std::binary_search(adj[a].begin(), adj[a].end(), b);
    }

    /// Enumerates all cliques of the 1-skeleton (the complex is flag).
    void build_simplices()
    {
        for (auto& a : adj)
            std::sort(a.begin(), a.end());
        simplices.assign(1, {});
        for (std::size_t v = 0; v < vertex_count(); ++v)
            simplices[0].push_back({v});
        std::vector<Simplex> layer = simplices[0];
        for (std::size_t k = 1; k <= d; ++k) {
            std::vector<Simplex> next;
            for (auto& s : layer)
                for (std::size_t w : adj[s.back()]) {
                    if (w <= s.back())
                        continue;
                    bool ok = std::all_of(s.begin(), s.end() - 1, [&](std::size_t u) { return incident(u, w); });
                    if (ok) {
                        auto t = s;
                        t.push_back(w);
                        next.push_back(std::move(t));
                    }
                }
            if (next.empty())
                break;
            std::sort(next.begin(), next.end());
            simplices.push_back(next);
            layer = std::move(next);
        }
        index_.clear();
        for (auto& layer_k : simplices) {
            std::map<Simplex, std::size_t> m;
            for (std::size_t j = 0; j < layer_k.size(); ++j)
                m.emplace(layer_k[j], j);
            index_.push_back(std::move(m));
        }
    }

    std::optional<std::size_t> find(const Simplex& s) const
    {
        if (s.empty() || s.size() > index_.size())
            return std::nullopt;
        auto it = index_[s.size() - 1].find(s);
        if (it == index_[s.size() - 1].end())
            return std::nullopt;
        return it->second;
    }

    std::size_t index_of(const Simplex& s) const
    {
        auto j = find(s);
        if (!j)
            throw std::out_of_range("simplex not in region");
        return *j;
    }

    std::size_t count(std::size_t k) const { return k < simplices.size() ? simplices[k].size() : 0; }

    /// Vertices ordered by label (for incidence numbers).
    Simplex label_sorted(const Simplex& s) const
    {
        Simplex t = s;
        std::sort(t.begin(), t.end(), [&](std::size_t a, std::size_t b) { return label[a] < label[b]; });
        return t;
    }

    /// [s : s minus v] = (-1)^(position of v in label order).
    int incidence_sign(const Simplex& s, std::size_t omitted) const
    {
        auto t = label_sorted(s);
        auto it = std::find(t.begin(), t.end(), omitted);
        if (it == t.end())
            throw std::invalid_argument("omitted vertex is not in the simplex");
        return (it - t.begin()) % 2 ? -1 : 1;
    }

    /// Vertices ordered by strictly increasing i.
    Simplex i_sorted(const Simplex& s) const
    {
        Simplex t = s;
        std::sort(t.begin(), t.end(), [&](std::size_t a, std::size_t b) { return ivalue[a] < ivalue[b]; });
        for (std::size_t j = 1; j < t.size(); ++j)
            if (ivalue[t[j - 1]] == ivalue[t[j]])
                throw std::logic_error("equal i-values inside a simplex");
        return t;
    }

    /// Comparison of simplices by their i-sorted tuples of i-values.
    int nabla_compare(const Simplex& a, const Simplex& b) const
    {
        auto x = i_sorted(a), y = i_sorted(b);
        for (std::size_t t = 0; t < std::min(x.size(), y.size()); ++t) {
            int c = lex_compare(ivalue[x[t]], ivalue[y[t]]);
            if (c)
                return c;
        }
        return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
    }

    /// sigma minus its vertex of minimal i.
    Simplex sigma_minus(const Simplex& s) const
    {
        auto t = i_sorted(s);
        Simplex out(t.begin() + 1, t.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    /// {z : z u eta is a simplex and i(z) < i(x_1)}, x_1 the i-minimal vertex of eta.
    std::vector<std::size_t> canonical_M0(const Simplex& eta) const
    {
        auto t = i_sorted(eta);
        const IValue& i1 = ivalue[t.front()];
        std::vector<std::size_t> out;
        for (std::size_t z : adj[t.front()]) {
            if (!(ivalue[z] < i1))
                continue;
            if (std::all_of(eta.begin(), eta.end(), [&](std::size_t x) { return incident(x, z); }))
                out.push_back(z);
        }
        return out;
    }

    /// Edge distances from a set of sources inside the region.
    std::vector<long> bfs(const std::vector<std::size_t>& sources) const
    {
        std::vector<long> dist(vertex_count(), -1);
        std::deque<std::size_t> q;
        for (auto s : sources) {
            dist[s] = 0;
            q.push_back(s);
        }
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            for (auto w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
        }
        return dist;
    }

    /// i(x) as (d(x,W_1), ..., d(x,W_d)) with W_1 = {z0} and W_i the vertices
    /// reached from W_{i-1} by a shortest path of ell-one steps. `unit_step(u, v)`
    /// says whether ell((u, v)) = 1. The region must contain the ball of radius
    /// 2^(d-1) d(x, z0) around z0; `ball_contained(r)` reports that.
    template <class UnitStep, class BallContained>
    IValue i_by_layers(std::size_t x, UnitStep unit_step, BallContained ball_contained) const
    {
        auto d0 = bfs({z0});
        long radius = d0[x] << (d > 0 ? d - 1 : 0);
        if (!ball_contained(radius))
            throw RegionTooSmall("region does not contain the ball of radius " + std::to_string(radius));
        IValue out;
        std::vector<std::size_t> w{z0};
        for (std::size_t i = 0; i < d; ++i) {
            auto dist = bfs(w);
            out.push_back(dist[x]);
            if (i + 1 == d)
                break;
            std::vector<std::size_t> order(vertex_count());
            for (std::size_t v = 0; v < order.size(); ++v)
                order[v] = v;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
            std::vector<char> reach(vertex_count(), 0);
            for (auto v : order) {
                if (dist[v] < 0)
                    continue;
                if (dist[v] == 0) {
                    reach[v] = 1;
                    continue;
                }
                for (auto u : adj[v])
                    if (dist[u] == dist[v] - 1 && reach[u] && unit_step(u, v)) {
                        reach[v] = 1;
                        break;
                    }
            }
            w.clear();
            for (std::size_t v = 0; v < vertex_count(); ++v)
                if (reach[v])
                    w.push_back(v);
        }
        return out;
    }

private:
    std::vector<std::map<Simplex, std::size_t>> index_;
};

} // namespace acyc
