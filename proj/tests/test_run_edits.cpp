#include <gtest/gtest.h>

#include "archruns/arch_model.hpp"
#include "archruns/run_edits.hpp"

using namespace archruns;

namespace {

const Run worked = parse_run("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4");

}  // namespace

TEST(RunBuilder, TrunkIsTheSingleRunOfKZero) {
    EXPECT_EQ(format_run(RunBuilder::trunk(4).finish()), "x1 x2 x3 x4");
    EXPECT_TRUE(RunBuilder::trunk(0).finish().empty());
}

TEST(RunEdits, WorkedRunFromNewLastArch) {
    const auto parent = parse_run("a1 b1 a2 a3 b3 x1 x2 c1 b2 c2 c3");
    ASSERT_TRUE(validate_run({5, 3}, parent));
    EXPECT_EQ(RunBuilder::from_run(parent).first_x_position(), 6u);
    EXPECT_EQ(apply_edit(Route::new_last_arch, parent, 8), worked);

    const auto peeled = peel_new_last_arch({5, 4}, worked);
    ASSERT_TRUE(peeled);
    EXPECT_EQ(peeled->p_b, 8);
    EXPECT_EQ(peeled->parent, parent);
}

TEST(RunEdits, WorkedRunFromNewFirstArch) {
    const auto parent = parse_run("a1 a2 b2 a3 x1 b3 x2 b1 c1 c2 c3");
    ASSERT_TRUE(validate_run({5, 3}, parent));
    EXPECT_EQ(apply_edit(Route::new_first_arch, parent, 1), worked);

    const auto peeled = peel_new_first_arch({5, 4}, worked);
    ASSERT_TRUE(peeled);
    EXPECT_EQ(peeled->p_b, 1);
    EXPECT_EQ(peeled->parent, parent);
}

TEST(RunEdits, WorkedRunHasNoTrunkSplitDerivation) { EXPECT_FALSE(peel_trunk_split({5, 4}, worked)); }

TEST(RunEdits, TrunkSplitOfAPureTrunk) {
    const auto trunk = RunBuilder::trunk(3).finish();
    const auto run = apply_edit(Route::trunk_split, trunk, 2);
    EXPECT_EQ(format_run(run), "a1 x1 b1 c1");
    const auto peeled = peel_trunk_split({2, 1}, run);
    ASSERT_TRUE(peeled);
    EXPECT_EQ(peeled->p_b, 2);
    EXPECT_EQ(peeled->parent, trunk);
}

TEST(RunEdits, TrunkSplitRangeIsChecked) {
    const auto trunk = RunBuilder::trunk(4).finish();
    EXPECT_THROW(apply_edit(Route::trunk_split, trunk, 1), invariant_error);
    EXPECT_THROW(apply_edit(Route::trunk_split, trunk, 4), invariant_error);
    EXPECT_NO_THROW(apply_edit(Route::trunk_split, trunk, 3));
}

TEST(RunEdits, EveryEditOfEveryRunIsValid) {
    // Forward edits of all runs of small parents land in the target shape.
    for (int n = 1; n <= 5; ++n) {
        for (int k = 0; k < n; ++k) {
            for (const auto& parent : enumerate_runs({n, k}, 100'000)) {
                const auto x1 = static_cast<std::int64_t>(RunBuilder::from_run(parent).first_x_position());
                for (std::int64_t p = 1; p <= static_cast<std::int64_t>(parent.size()) + 1; ++p) {
                    const auto route = p > x1 ? Route::new_last_arch : Route::new_first_arch;
                    EXPECT_TRUE(validate_run({n, k + 1}, apply_edit(route, parent, p)));
                }
                if (n - k >= 3) {
                    for (std::int64_t p = 2; p < n - k; ++p) {
                        EXPECT_TRUE(validate_run({n - 1, k + 1}, apply_edit(Route::trunk_split, parent, p)));
                    }
                }
            }
        }
    }
}

TEST(RunEdits, PeelsInvertTheForwardEdit) {
    for (int n = 1; n <= 5; ++n) {
        for (int k = 1; k <= n; ++k) {
            const Shape s{n, k};
            for (const auto& run : enumerate_runs(s, 100'000)) {
                int found = 0;
                if (auto p = peel_new_last_arch(s, run); p && validate_run(parent_shape(Route::new_last_arch, s), p->parent)) {
                    EXPECT_EQ(apply_edit(Route::new_last_arch, p->parent, p->p_b), run);
                    ++found;
                }
                if (auto p = peel_new_first_arch(s, run); p && validate_run(parent_shape(Route::new_first_arch, s), p->parent)) {
                    EXPECT_EQ(apply_edit(Route::new_first_arch, p->parent, p->p_b), run);
                    ++found;
                }
                if (auto p = peel_trunk_split(s, run); p) {
                    ASSERT_TRUE(validate_run(parent_shape(Route::trunk_split, s), p->parent)) << format_run(run);
                    EXPECT_EQ(apply_edit(Route::trunk_split, p->parent, p->p_b), run);
                    ++found;
                }
                EXPECT_GE(found, 1) << format_run(run);
            }
        }
    }
}

TEST(RunEdits, MergedNodeIsRejected) {
    EXPECT_THROW(RunBuilder::from_run(parse_run("a1 m c2 b1 b2")), domain_error);
}
