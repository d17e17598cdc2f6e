#pragma once
// Suite configuration and the random instance generators shared by the suites.

#include "acyc/io.hpp"
#include "acyc/report.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace acyc::suite {

using json = nlohmann::json;
using report::Record;
using report::Report;
using report::Verdict;

inline const std::vector<std::string> kSuites = {"apartment-lemmas", "building-counts", "os-props",  "s-criterion",
                                                  "cohomology",       "congruence",      "solve"};

struct SuiteConfig {
    std::string suite;
    std::vector<std::size_t> d;  // empty: suite default
    std::vector<long> p;
    int precision = 0;  // 0: suite default
    IValue bound;
    std::vector<Ring> rings;
    std::uint64_t seed = 1;
    std::size_t samples = 0;  // 0: suite default
    std::size_t max_lines = 6;
    std::size_t orderings = 50;
    std::optional<int> level;  // congruence level n
    std::optional<io::ArrangementFile> arrangement;
    bool negative_control = false;
    bool timing = false;

    json to_json() const
    {
        json rs = json::array();
        for (auto& r : rings)
            rs.push_back(r.name());
        json j = {{"suite", suite},         {"d", d},           {"p", p},
                  {"precision", precision}, {"bound", bound},   {"rings", rs},
                  {"seed", seed},           {"samples", samples}, {"max_lines", max_lines},
                  {"orderings", orderings}, {"negative_control", negative_control}};
        if (level)
            j["level"] = *level;
        if (arrangement)
            j["arrangement"] = io::to_json(*arrangement);
        return j;
    }

    std::size_t samples_or(std::size_t dflt) const { return samples ? samples : dflt; }
    int precision_or(int dflt) const { return precision ? precision : dflt; }
    std::vector<Ring> rings_or(std::vector<Ring> dflt) const { return rings.empty() ? dflt : rings; }
    std::vector<std::size_t> d_or(std::vector<std::size_t> dflt) const { return d.empty() ? dflt : d; }
    std::vector<long> p_or(std::vector<long> dflt) const { return p.empty() ? dflt : p; }
    IValue bound_or(std::size_t dim, long fill) const
    {
        return bound.size() == dim ? bound : IValue(dim, fill);
    }
};

inline const std::vector<Ring>& all_rings()
{
    static const std::vector<Ring> r = {Ring::integers(), Ring::rationals(), Ring::prime_field(2),
                                        Ring::prime_field(3), Ring::residues(4)};
    return r;
}

/// report::run_jobs, recording precision exhaustion as SKIPPED with its reason.
inline std::vector<Record> run_jobs(std::size_t n, const std::function<void(std::size_t, Record&)>& job)
{
    return report::run_jobs(n, [&](std::size_t i, Record& rec) {
        try {
            job(i, rec);
        } catch (const bt::PrecisionExhausted& e) {
            if (rec.verdict != Verdict::fail)
                rec.verdict = Verdict::skipped;
            rec.reason = std::string("precision exhausted: ") + e.what();
        }
    });
}

/// Generator for one job, from the suite seed and the job key.
inline std::mt19937_64 job_rng(std::uint64_t seed, const std::string& key)
{
    std::seed_seq seq(key.begin(), key.end());
    std::vector<std::uint32_t> mix(2);
    seq.generate(mix.begin(), mix.end());
    return std::mt19937_64(seed ^ (std::uint64_t(mix[0]) << 32 | mix[1]));
}

template <class T>
std::string show(const T& x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

inline std::string pad(std::size_t i, int width = 3)
{
    auto s = std::to_string(i);
    return std::string(s.size() < std::size_t(width) ? width - s.size() : 0, '0') + s;
}

/// Distinct primitive lines with coordinates in [-p-1, p+1], first nonzero entry positive.
template <class Rng>
os::Arrangement random_arrangement(std::size_t d, long p, int precision, std::size_t count, Rng& rng)
{
    os::Arrangement a;
    a.ctx = bt::PadicContext{p, precision, d, 1};
    std::uniform_int_distribution<long> coord(-p - 1, p + 1);
    for (int attempt = 0; a.lines.size() < count; ++attempt) {
        if (attempt > 10000)
            throw std::runtime_error("could not draw " + std::to_string(count) + " distinct lines");
        IntVector v(d + 1);
        Integer g = 0;
        for (auto& x : v) {
            x = coord(rng);
            g = gcd(g, x);
        }
        if (g == 0)
            continue;
        auto lead = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
        if (*lead < 0)
            g = -g;
        for (auto& x : v)
            x /= g;
        bool dup = false;
        for (auto& w : a.lines) {
            IntMatrix m(d + 1, 2);
            for (std::size_t i = 0; i <= d; ++i) {
                m(i, 0) = v[i];
                m(i, 1) = w[i];
            }
            dup = dup || la::rank(m, Ring::rationals()) < 2;
        }
        if (!dup)
            a.lines.push_back(std::move(v));
    }
    a.validate();
    return a;
}

/// Integer matrix with entries in [0, p) invertible mod p.
template <class Rng>
IntMatrix random_frame(std::size_t n, long p, Rng& rng)
{
    std::uniform_int_distribution<long> entry(0, p - 1);
    for (;;) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = entry(rng);
        if (la::rank(m, Ring::prime_field(p)) == n)
            return m;
    }
}

} // namespace acyc::suite
