#include "doctest.h"
#include "varbesov/harness.hpp"

using namespace varbesov;

TEST_CASE("two-dimensional campaign on a small corpus") {
    const auto cfg = parse_config(R"({"grid": {"dim": 2, "jmax": 2, "jfine": 5},
                                      "corpus": {"seed": 5, "size": 2, "sequences": 3}, "refine": false})");
    const auto corpus = make_corpus(cfg);
    for (const char* id : {"luxemburg_closed_form", "unit_ball", "mixed_dual_route", "duality_product", "calderon",
                           "oracle_reduction", "DHR", "r_trick", "DHHR_estimate", "key_estimate1", "key_estimate",
                           "lamda_equi", "key_lemmasection3", "norm_variants", "atomic_round_trip"}) {
        const auto r = run_check(id, corpus, cfg);
        INFO(std::string(id), " constant ", r.empirical_constant);
        for (const auto& [name, ok] : r.conditions) {
            INFO(name);
            CHECK(ok);
        }
        CHECK(r.pass);
    }
    for (const char* id : {"elem_q", "elem_alpha", "sobolev", "further"}) {
        INFO(std::string(id));
        CHECK(run_embedding(id, corpus, cfg).pass);
    }
}
