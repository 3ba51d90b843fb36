#include "doctest.h"
#include "fundusquant/curation.hpp"
#include "support.hpp"

using namespace fundusquant;
using namespace fq_test;

TEST_CASE("threshold is strict") {
    const ProbMap flat(16, 16, 0.75);
    CHECK(threshold_probmap(flat, 0.75).empty());
    ProbMap p(2, 1);
    p(0, 0) = 0.7500001;
    p(1, 0) = 0.75;
    const BinaryMask m = threshold_probmap(p);
    CHECK(m(0, 0));
    CHECK_FALSE(m(1, 0));
}

TEST_CASE("threshold is monotone") {
    Rng rng(6);
    ProbMap p(32, 32);
    for (double& v : p.data()) v = rng.uniform();
    BinaryMask prev = threshold_probmap(p, 0.01);
    for (double t = 0.05; t < 1.0; t += 0.05) {
        const BinaryMask cur = threshold_probmap(p, t);
        CHECK(cur.subset_of(prev));
        prev = cur;
    }
}

TEST_CASE("threshold bounds") {
    const ProbMap p(4, 4);
    for (double t : {0.0, 1.0, -0.2, 1.5}) {
        try {
            threshold_probmap(p, t);
            FAIL("expected BadThreshold");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BadThreshold);
        }
    }
}

TEST_CASE("comb is rejected for spurs") {
    const CurationVerdict v = topology_filter(comb());
    CHECK_FALSE(v.accepted);
    CHECK(v.violated_rules() == std::vector<std::string>{"spurs"});
    CHECK(v.stats.n_spurs >= 31);
    REQUIRE(v.reasons.size() == 3);
    CHECK(v.reasons[2].rule == "spurs");
}

TEST_CASE("clean tree is accepted") {
    const CurationVerdict v = topology_filter(clean_tree());
    CHECK(v.accepted);
    CHECK(v.violated_rules().empty());
    CHECK(v.stats.n_components == 1);
    CHECK(v.stats.largest_component_frac == 1.0);
}

TEST_CASE("scattered blobs are fragmented and disconnected") {
    BinaryMask m(300, 300);
    for (int i = 0; i < 50; ++i) paint_disk(m, {15.0 + 28 * (i % 10), 20.0 + 50 * (i / 10)}, 3.0);
    const CurationVerdict v = topology_filter(m);
    CHECK_FALSE(v.accepted);
    CHECK(v.stats.n_fragments == 50);
    const auto rules = v.violated_rules();
    CHECK(std::find(rules.begin(), rules.end(), "fragmentation") != rules.end());
    CHECK(std::find(rules.begin(), rules.end(), "disconnection") != rules.end());
}

TEST_CASE("empty mask is accepted") {
    const CurationVerdict v = topology_filter(BinaryMask(10, 10));
    CHECK(v.accepted);
    CHECK(v.stats.n_components == 0);
}
