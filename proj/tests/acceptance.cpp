// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero if any criterion fails.

#include "acyc/suites.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

using namespace acyc;
using suite::Report;
using suite::SuiteConfig;
using json = nlohmann::json;

namespace {

struct Run {
    Report rep;
    double seconds = 0;
};

Run timed(const SuiteConfig& cfg)
{
    auto t0 = std::chrono::steady_clock::now();
    Run r{suite::run_suite(cfg)};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SuiteConfig config(const std::string& name)
{
    SuiteConfig cfg;
    cfg.suite = name;
    cfg.seed = 20240601;
    return cfg;
}

std::size_t total(const Report& rep, const std::string& statement)
{
    std::size_t n = 0;
    for (auto& r : rep.records)
        n += r.checks.value(statement, std::size_t(0));
    return n;
}

std::size_t total(const Report& rep)
{
    std::size_t n = 0;
    for (auto& r : rep.records)
        for (auto& [k, v] : r.checks.items())
            n += v.get<std::size_t>();
    return n;
}

int failed = 0;

void verdict(int id, bool ok, const std::string& what)
{
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << "\n";
    if (!ok)
        ++failed;
}

void note(const std::string& s) { std::cout << "      " << s << "\n"; }

void summary(const Run& run)
{
    std::ostringstream os;
    os << run.rep.records.size() << " records, " << total(run.rep) << " checks, "
       << run.rep.count(report::Verdict::fail) << " failed, " << run.rep.count(report::Verdict::skipped)
       << " skipped, " << std::fixed << std::setprecision(1) << run.seconds << "s";
    note(os.str());
}

void one_per_statement(const Run& run)
{
    std::set<std::string> seen;
    for (auto& r : run.rep.records)
        for (auto& f : r.failures)
            if (seen.insert(f.substr(0, f.find(':'))).second)
                note(r.key + ": " + f.substr(0, 220));
}

void first_failures(const Run& run, std::size_t limit = 3)
{
    std::size_t shown = 0;
    for (auto& r : run.rep.records)
        for (auto& f : r.failures)
            if (shown++ < limit)
                note(r.key + ": " + f.substr(0, 220));
}

} // namespace

int main()
{
    std::map<std::string, Run> runs;
    std::map<std::string, SuiteConfig> configs;

    {
        auto cfg = config("apartment-lemmas");
        cfg.d = {1, 2, 3};
        cfg.bound = {};
        auto run = timed(cfg);
        verdict(1, !run.rep.falsified() && total(run.rep) > 0 && run.seconds < 300,
                "apartment lemmas, d in {1,2,3}, B=(2,...), zero failures, under 5 minutes");
        summary(run);
        first_failures(run);
        runs["apartment-lemmas"] = run;
        configs["apartment-lemmas"] = cfg;
    }
    {
        auto cfg = config("building-counts");
        cfg.d = {1, 2, 3};
        cfg.p = {2, 3};
        auto run = timed(cfg);
        bool counts = false, embed = false;
        for (auto& r : run.rep.records)
            if (r.key == "building/d=2/p=2/region") {
                counts = r.data.value("simplices", json::array()) == json::array({15, 35, 21});
                embed = r.checks.value("embed-covers", 0) == 21 && r.verdict == report::Verdict::pass;
            }
        std::size_t neighbor_jobs = 0;
        for (auto& r : run.rep.records)
            neighbor_jobs += r.key.find("/neighbors") != std::string::npos && r.verdict == report::Verdict::pass;
        verdict(2, !run.rep.falsified() && counts && embed && neighbor_jobs == 6,
                "neighbor counts for (d,p) in {1,2,3}x{2,3}, d=2 p=2 B=(1,1) has 15/35/21, embeddings compatible");
        summary(run);
        note(std::string("15/35/21: ") + (counts ? "yes" : "no") + ", all 21 chambers embedded: " +
               (embed ? "yes" : "no") + ", neighbor jobs passing: " + std::to_string(neighbor_jobs) + "/6");
        first_failures(run);
        runs["building-counts"] = run;
        configs["building-counts"] = cfg;
    }
    {
        auto cfg = config("os-props");
        auto run = timed(cfg);
        std::map<std::string, std::size_t> refuted;
        for (auto& r : run.rep.records)
            if (r.data.contains("refuted"))
                for (auto& [k, v] : r.data["refuted"].items())
                    refuted[k] += v.get<std::size_t>();
        verdict(3, !run.rep.falsified() && total(run.rep, "nbc=rank") > 0,
                "Orlik-Solomon local suite over Z, Q, F2, F3, Z/4, zero failures");
        summary(run);
        note("delta^2=0 " + std::to_string(total(run.rep, "delta^2=0")) + ", leibniz " +
               std::to_string(total(run.rep, "leibniz")) + ", im=ker " + std::to_string(total(run.rep, "im=ker")) +
               ", nbc=rank " + std::to_string(total(run.rep, "nbc=rank")) + ", K-exact " +
               std::to_string(total(run.rep, "K-exact")) + ", stable families " +
               std::to_string(total(run.rep, "collection")));
        for (auto& s : {"J=cap", "G-spans", "free", "G-basis", "K-exact", "union", "intersection", "cardinality",
                        "rank", "restricted-adapted"}) {
            std::size_t checked = total(run.rep, s);
            note(std::string(s) + ": refuted on " + std::to_string(refuted[s]) + " of " + std::to_string(checked));
        }
        one_per_statement(run);
        runs["os-props"] = run;
        configs["os-props"] = cfg;
    }
    {
        auto cfg = config("s-criterion");
        auto run = timed(cfg);
        bool constant = false, dual = total(run.rep, "S*(k)") > 0;
        for (auto& r : run.rep.records)
            constant = constant || r.key.find("/constant/") != std::string::npos;
        verdict(4, !run.rep.falsified() && constant && dual && total(run.rep, "d=1: |M0|<=1") > 0,
                "S(k) on A~ and A, |M0| <= 1 when d=1, constant systems, S*(k) on duals");
        summary(run);
        note("S(k) " + std::to_string(total(run.rep, "S(k)")) + ", S*(k) " + std::to_string(total(run.rep, "S*(k)")) +
               ", d=1 singletons " + std::to_string(total(run.rep, "d=1: |M0|<=1")));
        first_failures(run);
        runs["s-criterion"] = run;
        configs["s-criterion"] = cfg;
    }
    {
        auto cfg = config("cohomology");
        cfg.d = {2};
        cfg.p = {2};
        cfg.bound = {1, 1};
        cfg.max_lines = 5;
        auto run = timed(cfg);
        verdict(5, !run.rep.falsified() && total(run.rep, "H^k=0") > 0 && run.seconds < 600,
                "H^k(Region, A~) = H^k(Region, A) = 0 for k >= 1, d=2 p=2 B=(1,1), |A| <= 5, over Z, under 10 minutes");
        summary(run);
        first_failures(run);
        runs["cohomology"] = run;
        configs["cohomology"] = cfg;
    }
    {
        auto cfg = config("solve");
        cfg.d = {2};
        cfg.p = {2};
        cfg.bound = {1, 1};
        cfg.max_lines = 5;
        auto run = timed(cfg);
        verdict(6, !run.rep.falsified() && total(run.rep, "solve") > 0 &&
                       total(run.rep, "solve") == total(run.rep, "agrees-with-direct"),
                "solve_coboundary on full kernel bases, re-multiplied, agreeing with the direct solve");
        summary(run);
        first_failures(run);
        runs["solve"] = run;
        configs["solve"] = cfg;
    }
    {
        auto cfg = config("congruence");
        cfg.samples = 1000;
        auto run = timed(cfg);
        bool full = run.rep.records.size() == 3;
        for (auto& r : run.rep.records)
            full = full && r.checks.value("factor", 0) == 1000;
        verdict(7, !run.rep.falsified() && full,
                "congruence factorization, 1000 samples for each of (1,2,1,4), (2,2,2,5), (2,3,2,5)");
        summary(run);
        first_failures(run);
        runs["congruence"] = run;
        configs["congruence"] = cfg;
    }
    {
        bool same = true;
        for (auto& [name, run] : runs) {
            auto again = suite::run_suite(configs[name]);
            bool eq = again.json_text() == run.rep.json_text() && again.csv_text() == run.rep.csv_text();
            note(name + (eq ? ": identical" : ": DIFFERS"));
            same = same && eq;
        }
        verdict(8, same && runs.size() == 7, "every suite run twice with the same config and seed gives identical bytes");
    }
    std::cout << (failed ? std::to_string(failed) + " of 8 criteria failed" : "all 8 criteria passed") << "\n";
    return failed ? 1 : 0;
}
