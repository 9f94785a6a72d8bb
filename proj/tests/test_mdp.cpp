#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "tabrl/mdp.hpp"
#include "test_util.hpp"

using namespace tabrl;
using namespace tabrl::testutil;

namespace {

TabularMdp two_state() {
    TabularMdp mdp = blank_mdp(2, 2);
    det_edge(mdp, 0, 0, 1, 1.0);
    det_edge(mdp, 0, 1, 0, 0.0);
    mdp.terminal[1] = 1;
    return mdp;
}

}  // namespace

TEST_CASE("well-formed two-state mdp validates cleanly") {
    CHECK(validate(two_state()).empty());
}

TEST_CASE("row summing to 1.1 is reported") {
    TabularMdp mdp = two_state();
    mdp.transitions[mdp.sa_index(0, 1)] = {{0, 0.5}, {1, 0.6}};
    const auto problems = validate(mdp);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("sum") != std::string::npos);
}

TEST_CASE("successor index out of range is reported") {
    TabularMdp mdp = two_state();
    mdp.transitions[mdp.sa_index(0, 1)] = {{2, 1.0}};
    const auto problems = validate(mdp);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("range") != std::string::npos);
}

TEST_CASE("negative probability, non-finite reward, bad start weights") {
    TabularMdp mdp = two_state();
    mdp.transitions[mdp.sa_index(0, 1)] = {{0, 1.5}, {1, -0.5}};
    CHECK(!validate(mdp).empty());

    mdp = two_state();
    mdp.rewards[0] = std::nan("");
    CHECK(!validate(mdp).empty());

    mdp = two_state();
    mdp.initial_states = {{0, 0.7}};
    CHECK(!validate(mdp).empty());

    mdp = two_state();
    mdp.initial_states = {{1, 1.0}};  // terminal start
    CHECK(!validate(mdp).empty());
}

TEST_CASE("deterministic row always yields its point mass") {
    const TabularMdp mdp = two_state();
    RngStream rng(5);
    for (int i = 0; i < 100; ++i) {
        const Transition t = step(mdp, 0, 0, rng);
        CHECK(t.next_state == 1);
        CHECK(t.reward == 1.0);
        CHECK(t.terminal);
        CHECK(t.state == 0);
        CHECK(t.action == 0);
    }
}

TEST_CASE("half-half row hits each successor about half the time") {
    TabularMdp mdp = blank_mdp(3, 1);
    mdp.transitions[mdp.sa_index(0, 0)] = {{1, 0.5}, {2, 0.5}};
    det_edge(mdp, 1, 0, 0, 0.0);
    det_edge(mdp, 2, 0, 0, 0.0);
    RngStream rng(6);
    int hits = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        if (step(mdp, 0, 0, rng).next_state == 1) ++hits;
    CHECK(std::abs(hits / static_cast<double>(draws) - 0.5) < 0.01);
}

TEST_CASE("stepping from a terminal state throws") {
    const TabularMdp mdp = two_state();
    RngStream rng(7);
    CHECK_THROWS(step(mdp, 1, 0, rng));
}

TEST_CASE("reset returns the single start state") {
    const TabularMdp mdp = two_state();
    RngStream rng(8);
    for (int i = 0; i < 50; ++i) CHECK(reset(mdp, rng) == 0);
}

TEST_CASE("reset follows a multi-point start distribution") {
    TabularMdp mdp = blank_mdp(4, 1);
    for (StateId s = 0; s < 4; ++s) det_edge(mdp, s, 0, s, 0.0);
    mdp.initial_states = {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}};
    RngStream rng(9);
    std::vector<long> counts(4, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[reset(mdp, rng)];
    // df=3, 1% critical value 11.34
    CHECK(chi_square(counts, {0.1 * draws, 0.2 * draws, 0.3 * draws, 0.4 * draws}) <
          11.34);
}

TEST_CASE("step streams with equal origins are identical element-wise") {
    TabularMdp mdp = blank_mdp(4, 2);
    mdp.transitions[mdp.sa_index(0, 0)] = {{1, 0.25}, {2, 0.25}, {3, 0.5}};
    mdp.transitions[mdp.sa_index(0, 1)] = {{2, 0.5}, {3, 0.5}};
    for (StateId s = 1; s < 4; ++s)
        for (ActionId a = 0; a < 2; ++a) det_edge(mdp, s, a, 0, 0.0);
    RngStream r1(77), r2(77);
    for (int i = 0; i < 2000; ++i) {
        const ActionId a = static_cast<ActionId>(i % 2);
        const Transition t1 = step(mdp, 0, a, r1);
        const Transition t2 = step(mdp, 0, a, r2);
        CHECK(t1.next_state == t2.next_state);
        CHECK(t1.reward == t2.reward);
        CHECK(t1.terminal == t2.terminal);
    }
}

TEST_CASE("empirical successor frequencies pass a chi-square test") {
    TabularMdp mdp = blank_mdp(4, 1);
    mdp.transitions[mdp.sa_index(0, 0)] = {{1, 0.2}, {2, 0.3}, {3, 0.5}};
    for (StateId s = 1; s < 4; ++s) det_edge(mdp, s, 0, 0, 0.0);
    RngStream rng(10);
    std::vector<long> counts(4, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[step(mdp, 0, 0, rng).next_state];
    // df=2, 1% critical value 9.21
    CHECK(chi_square({counts[1], counts[2], counts[3]},
                     {0.2 * draws, 0.3 * draws, 0.5 * draws}) < 9.21);
}
