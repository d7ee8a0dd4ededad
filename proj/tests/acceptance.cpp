// One PASS/FAIL line per acceptance criterion on the default 1D grid.
// Usage: acceptance [--criterion N]...   (all twelve when none given)

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "varbesov/harness.hpp"

using namespace varbesov;

namespace {

struct Criterion {
    int number;
    const char* title;
    std::vector<std::string> checks;
    int sequences;
};

const std::vector<Criterion> kCriteria = {
    {1, "Luxemburg closed form", {"luxemburg_closed_form"}, 50},
    {2, "unit-ball property", {"unit_ball"}, 50},
    {3, "mixed-norm dual route", {"mixed_dual_route"}, 50},
    {4, "duality product", {"duality_product"}, 50},
    {5, "Calderon identity and reconstruction", {"calderon"}, 50},
    {6, "constant-exponent collapse", {"oracle_reduction"}, 100},
    {7, "lambda* two-sided bound", {"lamda_equi"}, 50},
    {8, "norm-variant equivalences", {"norm_variants"}, 50},
    {9, "coefficient bound", {"key_lemmasection3"}, 50},
    {10, "embeddings", {"elem_q", "elem_alpha", "sobolev", "further"}, 50},
    {11, "atomic round trip", {"atomic_round_trip"}, 50},
    {12, "kernel lemma suite", {"DHR", "r_trick", "DHHR_estimate", "alm_hasto", "key_estimate1", "key_lemma"}, 50},
};

bool is_embedding(const std::string& id) {
    const auto ids = embedding_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string summary(const CheckReport& r) {
    std::ostringstream s;
    s.precision(4);
    s << r.check_id << (r.pass ? " ok" : " FAILED") << " (c=" << r.empirical_constant << ", bound=" << r.bound
      << ", cases=" << r.ratios.size();
    for (const auto& [name, ok] : r.conditions)
        if (!ok) s << ", violated: " << name;
    s << ")";
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            wanted.insert(std::stoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }
    std::map<int, Corpus> corpora;
    bool all_pass = true;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && !wanted.count(c.number)) continue;
        HarnessConfig cfg;
        cfg.sequences = c.sequences;
        if (!corpora.count(c.sequences)) corpora.emplace(c.sequences, make_corpus(cfg));
        const Corpus& corpus = corpora.at(c.sequences);
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = true;
        std::string details;
        for (const auto& id : c.checks) {
            CheckReport r;
            try {
                r = is_embedding(id) ? run_embedding(id, corpus, cfg) : run_check(id, corpus, cfg);
            } catch (const std::exception& e) {
                r.check_id = id;
                r.pass = false;
                r.notes.push_back(e.what());
                details += (details.empty() ? "" : "; ") + id + " threw: " + e.what();
                pass = false;
                continue;
            }
            pass = pass && r.pass;
            details += (details.empty() ? "" : "; ") + summary(r);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all_pass = all_pass && pass;
        std::printf("%s criterion %d: %s [%.1f s] %s\n", pass ? "PASS" : "FAIL", c.number, c.title, secs,
                    details.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
