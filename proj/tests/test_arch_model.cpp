#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "archruns/arch_model.hpp"
#include "archruns/counting.hpp"
#include "oracles.hpp"

using namespace archruns;

namespace {

std::vector<std::string> names(const std::vector<Action>& actions) {
    std::vector<std::string> out;
    for (const auto& a : actions) out.push_back(to_string(a));
    return out;
}

std::vector<std::string> names(const std::vector<std::pair<Action, Action>>& pairs, bool first) {
    std::vector<std::string> out;
    for (const auto& [u, v] : pairs) out.push_back(to_string(first ? u : v));
    return out;
}

}  // namespace

TEST(ActionSet, CanonicalOrderMatchesTextualDefinition) {
    for (int n = 0; n <= 6; ++n) {
        for (int k = 0; k <= n + 1; ++k) {
            EXPECT_EQ(names(action_set({n, k})), oracle::labels(n, k)) << n << "," << k;
        }
    }
}

TEST(ActionSet, Examples) {
    EXPECT_EQ(action_set({5, 4}).size(), 13u);
    EXPECT_EQ(format_run(action_set({3, 0})), "x1 x2 x3");
    EXPECT_EQ(format_run(action_set({1, 2})), "a1 m c2 b1 b2");
}

TEST(ActionSet, InvalidShapesThrow) {
    EXPECT_THROW(action_set({2, 4}), domain_error);
    EXPECT_THROW(action_set({-1, 0}), domain_error);
    EXPECT_THROW(action_set({0, -1}), domain_error);
}

TEST(Shape, ActionCount) {
    EXPECT_EQ((Shape{5, 4}).action_count(), 13);
    EXPECT_EQ((Shape{3, 4}).action_count(), 11);
    EXPECT_TRUE((Shape{3, 4}).merged());
    EXPECT_FALSE((Shape{3, 5}).valid());
}

TEST(PrecedencePairs, MatchOracleCovers) {
    for (int n = 0; n <= 6; ++n) {
        for (int k = 0; k <= n + 1; ++k) {
            std::set<std::pair<std::string, std::string>> got;
            for (const auto& [u, v] : precedence_pairs({n, k})) got.emplace(to_string(u), to_string(v));
            const auto want = oracle::covers(n, k);
            EXPECT_EQ(got, std::set(want.begin(), want.end())) << n << "," << k;
        }
    }
}

TEST(PrecedencePairs, Examples) {
    EXPECT_EQ(precedence_pairs({5, 4}).size(), 16u);  // 8 trunk-chain edges + 8 arch edges
    const auto trunk = precedence_pairs({3, 0});
    EXPECT_EQ(names(trunk, true), (std::vector<std::string>{"x1", "x2"}));
    EXPECT_EQ(names(trunk, false), (std::vector<std::string>{"x2", "x3"}));
    std::set<std::pair<std::string, std::string>> merged;
    for (const auto& [u, v] : precedence_pairs({1, 2})) merged.emplace(to_string(u), to_string(v));
    const std::set<std::pair<std::string, std::string>> expected = {
        {"a1", "m"}, {"m", "c2"}, {"a1", "b1"}, {"b1", "m"}, {"m", "b2"}, {"b2", "c2"}};
    EXPECT_EQ(merged, expected);
}

TEST(ValidateRun, Examples) {
    EXPECT_TRUE(validate_run({5, 4}, parse_run("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4")));
    EXPECT_FALSE(validate_run({5, 4}, parse_run("b1 a1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4")));
    EXPECT_TRUE(validate_run({2, 1}, parse_run("a1 x1 b1 c1")));
}

TEST(ValidateRun, MalformedInputIsRejected) {
    EXPECT_FALSE(validate_run({2, 1}, parse_run("a1 x1 b1")));           // missing c1
    EXPECT_FALSE(validate_run({2, 1}, parse_run("a1 x1 b1 c1 c1")));     // duplicate
    EXPECT_FALSE(validate_run({2, 1}, parse_run("a1 x2 b1 c1")));        // x2 does not exist
    EXPECT_FALSE(validate_run({2, 1}, parse_run("a1 b1 x1 b1")));        // duplicate replacing c1
    EXPECT_FALSE(validate_run({1, 2}, parse_run("a1 a2 c1 c2 b1 b2")));  // merged shape has m
    EXPECT_FALSE(validate_run({3, 5}, parse_run("a1")));                  // invalid shape
}

TEST(EnumerateRuns, MatchesOracleSets) {
    for (int n = 0; n <= 5; ++n) {
        for (int k = 0; k <= std::min(n + 1, 4); ++k) {
            std::vector<std::vector<std::string>> got;
            for (const auto& run : enumerate_runs({n, k}, 100'000)) {
                EXPECT_TRUE(validate_run({n, k}, run));
                got.push_back(names(run));
            }
            std::sort(got.begin(), got.end());
            EXPECT_EQ(got, oracle::all_runs(n, k)) << n << "," << k;
        }
    }
}

TEST(EnumerateRuns, Examples) {
    const auto one = enumerate_runs({1, 1}, 10);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(format_run(one[0]), "a1 b1 c1");
    EXPECT_EQ(enumerate_runs({2, 2}, 10).size(), 5u);
    EXPECT_EQ(enumerate_runs({5, 4}, 2000).size(), 1270u);
}

TEST(EnumerateRuns, OutputIsStrictlyIncreasingInCanonicalOrder) {
    const auto canonical = action_set({4, 3});
    const auto key = [&](const archruns::Run& run) {
        std::vector<std::ptrdiff_t> out;
        for (const auto& a : run) out.push_back(std::find(canonical.begin(), canonical.end(), a) - canonical.begin());
        return out;
    };
    const auto runs = enumerate_runs({4, 3}, 1000);
    for (std::size_t i = 1; i < runs.size(); ++i) EXPECT_LT(key(runs[i - 1]), key(runs[i]));
}

TEST(EnumerateRuns, CapIsAnError) {
    EXPECT_THROW(enumerate_runs({2, 2}, 4), overflow_error);
    EXPECT_NO_THROW(enumerate_runs({2, 2}, 5));
}

TEST(CountRunsBrute, Examples) {
    EXPECT_EQ(count_runs_brute({2, 2}, 10), 5);
    EXPECT_EQ(count_runs_brute({1, 2}, 10), 1);
    EXPECT_EQ(count_runs_brute({0, 1}, 10), 0);
    for (int n = 0; n <= 30; ++n) EXPECT_EQ(count_runs_brute({n, 0}, 1), 1);
    EXPECT_THROW(count_runs_brute({5, 4}, 1269), overflow_error);
    EXPECT_EQ(count_runs_brute({5, 4}, 1270), 1270);
}

TEST(CountRunsBrute, AgreesWithOracleRecursion) {
    for (int n = 0; n <= 8; ++n) {
        for (int k = 0; k <= n + 1; ++k) {
            if (oracle::t(n, k) > 1'000'000) continue;
            EXPECT_EQ(count_runs_brute({n, k}, 1'000'000), oracle::t(n, k)) << n << "," << k;
        }
    }
}

TEST(CountRunsBrute, MergedShapesMatchReferenceDiagonal) {
    EXPECT_EQ(count_runs_brute({1, 2}, 1'000'000), 1);
    EXPECT_EQ(count_runs_brute({2, 3}, 1'000'000), 12);
    EXPECT_EQ(count_runs_brute({3, 4}, 1'000'000), 170);
    EXPECT_EQ(count_runs_brute({4, 5}, 1'000'000), 2940);
}

TEST(CountRunsBrute, WithinBounds) {
    for (int n = 1; n <= 7; ++n) {
        for (int k = 0; k < n + 1; ++k) {
            const auto c = count_runs_brute({n, k}, 10'000'000);
            EXPECT_LE(lower_bound(n, k), c);
            EXPECT_LE(c, upper_bound(n, k));
        }
    }
}

TEST(TextFormat, ParseIsCaseInsensitiveAndAcceptsCommas) {
    EXPECT_EQ(format_run(parse_run("A1,B1, C1")), "a1 b1 c1");
    EXPECT_EQ(format_run(parse_run("  a1\tm  c2 ,b1 b2 ")), "a1 m c2 b1 b2");
    EXPECT_EQ(parse_action("X12"), Action::x(12));
    EXPECT_THROW(parse_action("q1"), parse_error);
    EXPECT_THROW(parse_action("a"), parse_error);
    EXPECT_THROW(parse_action("a0"), parse_error);
}
