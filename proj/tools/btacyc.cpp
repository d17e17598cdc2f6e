// btacyc: run a verification suite and write JSON/CSV reports.
//
//   btacyc os-props --d 1 --p 2 --seed 7 --out runs/os
//   BTACYC_WORKERS=4 btacyc s-criterion --ring Z,F2
//
// Exit status: 0 all records pass or skip, 1 some record failed, 2 bad config.

#include "acyc/suites.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

template <class T>
std::vector<T> split_list(const std::string& s, T (*conv)(const std::string&))
{
    std::vector<T> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            out.push_back(conv(item));
    return out;
}

long to_long(const std::string& s)
{
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

acyc::Ring to_ring(const std::string& s) { return acyc::Ring::parse(s); }

void write_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace acyc;
    CLI::App app{"Local acyclicity checks on Ã_d buildings and Orlik-Solomon coefficient systems"};
    app.require_subcommand(1, 1);

    std::string d, p, bound, rings, out, arrangement;
    int precision = 0, level = 0;
    std::uint64_t seed = 1;
    std::size_t samples = 0, max_lines = 6, orderings = 50;
    bool timing = false, negative = false, quiet = false;

    for (auto& name : suite::kSuites) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--d", d, "dimensions, comma separated");
        sub->add_option("--p", p, "primes, comma separated");
        sub->add_option("--precision", precision, "p-adic precision m (0: suite default)");
        sub->add_option("--bound", bound, "i-bound B, comma separated");
        sub->add_option("--ring", rings, "base rings: Z, Q, F<p>, Z/<m>");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--samples", samples, "sample count (0: suite default)");
        sub->add_option("--out", out, "output prefix; writes <out>.json and <out>.csv");
        sub->add_option("--arrangement", arrangement, "arrangement JSON file");
        sub->add_option("--max-lines", max_lines, "largest random |A|")->check(CLI::Range(1, 20));
        sub->add_option("--orderings", orderings, "adapted orderings per chain");
        sub->add_flag("--timing", timing, "record per-instance seconds");
        sub->add_flag("--quiet", quiet, "no table on stdout");
        if (name == "congruence")
            sub->add_option("--level", level, "congruence level n");
        if (name == "s-criterion")
            sub->add_flag("--negative-control", negative, "corrupt one restriction map");
    }

    CLI11_PARSE(app, argc, argv);

    suite::SuiteConfig cfg;
    try {
        cfg.suite = app.get_subcommands().front()->get_name();
        cfg.d = split_list<std::size_t>(d, [](const std::string& s) {
            long v = to_long(s);
            if (v < 1 || v > 6)
                throw std::invalid_argument("--d must be between 1 and 6");
            return static_cast<std::size_t>(v);
        });
        cfg.p = split_list<long>(p, to_long);
        for (auto q : cfg.p)
            bt::PadicContext{q, precision ? precision : 8, 1, 1}.validate();
        cfg.precision = precision;
        cfg.bound = split_list<long>(bound, to_long);
        cfg.rings = split_list<Ring>(rings, to_ring);
        cfg.seed = seed;
        cfg.samples = samples;
        cfg.max_lines = max_lines;
        cfg.orderings = orderings;
        cfg.timing = timing;
        cfg.negative_control = negative;
        if (level)
            cfg.level = level;
        if (!arrangement.empty())
            cfg.arrangement = io::read_arrangement(arrangement);
    } catch (const std::exception& e) {
        std::cerr << "btacyc: " << e.what() << "\n";
        return 2;
    }

    suite::Report rep;
    try {
        rep = suite::run_suite(cfg);
    } catch (const std::exception& e) {
        std::cerr << "btacyc: " << e.what() << "\n";
        return 2;
    }

    if (!out.empty()) {
        write_file(out + ".json", rep.json_text());
        write_file(out + ".csv", rep.csv_text());
    }
    if (!quiet) {
        for (auto& r : rep.records) {
            std::cout << report::to_string(r.verdict) << "  " << r.key;
            if (!r.reason.empty())
                std::cout << "  (" << r.reason << ")";
            std::cout << "\n";
            for (auto& f : r.failures)
                std::cout << "    " << f << "\n";
        }
        std::cout << rep.records.size() << " records: " << rep.count(report::Verdict::pass) << " pass, "
                  << rep.count(report::Verdict::fail) << " fail, " << rep.count(report::Verdict::skipped)
                  << " skipped\n";
    }
    return rep.falsified() ? 1 : 0;
}
