#pragma once
// Suite records, deterministic JSON/CSV reports, and a small worker pool.

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace acyc::report {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Verdict { pass, fail, skipped };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::skipped: return "SKIPPED";
    }
    return "?";
}

struct Record {
    std::string key;  // sort key, unique within a report
    json inputs = json::object();
    Verdict verdict = Verdict::pass;
    json checks = json::object();  // statement -> count of instances checked
    std::vector<std::string> failures;
    std::string reason;  // for SKIPPED
    json data;  // ranks and other computed values
    json dump;  // replayable instance on failure
    double seconds = 0;

    void fail(const std::string& what)
    {
        verdict = Verdict::fail;
        if (failures.size() < 20)
            failures.push_back(what);
    }
    void count(const std::string& statement, std::size_t n = 1)
    {
        checks[statement] = checks.value(statement, std::size_t(0)) + n;
    }
};

struct Report {
    std::string suite;
    json config;
    std::vector<Record> records;
    bool with_timing = false;

    void sort() { std::sort(records.begin(), records.end(), [](auto& a, auto& b) { return a.key < b.key; }); }

    std::size_t count(Verdict v) const
    {
        return std::count_if(records.begin(), records.end(), [&](auto& r) { return r.verdict == v; });
    }
    bool falsified() const { return count(Verdict::fail) > 0; }

    json to_json() const
    {
        json recs = json::array();
        for (auto& r : records) {
            json j = {{"key", r.key}, {"inputs", r.inputs}, {"verdict", to_string(r.verdict)}, {"checks", r.checks}};
            if (!r.failures.empty())
                j["failures"] = r.failures;
            if (!r.data.is_null())
                j["data"] = r.data;
            if (!r.reason.empty())
                j["reason"] = r.reason;
            if (!r.dump.is_null())
                j["instance"] = r.dump;
            if (with_timing)
                j["seconds"] = r.seconds;
            recs.push_back(j);
        }
        return {{"schema_version", kSchemaVersion},
                {"suite", suite},
                {"config", config},
                {"summary",
                 {{"records", records.size()},
                  {"pass", count(Verdict::pass)},
                  {"fail", count(Verdict::fail)},
                  {"skipped", count(Verdict::skipped)}}},
                {"records", recs}};
    }

    std::string json_text() const { return to_json().dump(1) + "\n"; }

    std::string csv_text() const
    {
        std::ostringstream os;
        os << "key,verdict,checks,failures" << (with_timing ? ",seconds" : "") << "\n";
        for (auto& r : records) {
            std::size_t total = 0;
            for (auto& [k, v] : r.checks.items())
                total += v.get<std::size_t>();
            os << '"' << r.key << "\"," << to_string(r.verdict) << ',' << total << ',' << r.failures.size();
            if (with_timing)
                os << ',' << r.seconds;
            os << "\n";
        }
        return os.str();
    }
};

/// Worker count from BTACYC_WORKERS, default 1.
inline std::size_t workers()
{
    const char* s = std::getenv("BTACYC_WORKERS");
    if (!s)
        return 1;
    long n = std::strtol(s, nullptr, 10);
    return n < 1 ? 1 : static_cast<std::size_t>(std::min(n, 64L));
}

/// Runs job(i, record) for i < n on the pool. An exception marks that
/// record failed with the message; the key set before the throw is kept.
inline std::vector<Record> run_jobs(std::size_t n, const std::function<void(std::size_t, Record&)>& job,
                                    std::size_t threads = workers())
{
    std::vector<Record> out(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            auto t0 = std::chrono::steady_clock::now();
            try {
                job(i, out[i]);
            } catch (const std::exception& e) {
                if (out[i].key.empty())
                    out[i].key = "job-" + std::to_string(i);
                out[i].fail(std::string("exception: ") + e.what());
            }
            out[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, n));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return out;
}

} // namespace acyc::report
