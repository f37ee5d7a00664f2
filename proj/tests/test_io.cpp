#include <gtest/gtest.h>

#include "archruns/io.hpp"

using namespace archruns;

TEST(RunJson, RoundTrip) {
    const auto run = parse_run("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4");
    const auto j = run_to_json({5, 4}, run);
    EXPECT_EQ(j.dump(), R"({"k":4,"n":5,"run":["a1","b1","a2","a3","b3","a4","x1","b4","c1","b2","c2","c3","c4"]})");
    const auto back = run_from_json(j.dump());
    EXPECT_EQ(back.shape.n, 5);
    EXPECT_EQ(back.shape.k, 4);
    EXPECT_EQ(back.run, run);
}

TEST(RunJson, ParsingIsCaseInsensitive) {
    const auto r = run_from_json(R"({"n":1,"k":2,"run":["A1","M","c2","B1","b2"]})");
    EXPECT_EQ(format_run(r.run), "a1 m c2 b1 b2");
}

TEST(RunJson, MalformedInputIsAParseError) {
    EXPECT_THROW(run_from_json("{"), parse_error);
    EXPECT_THROW(run_from_json(R"({"n":1,"run":[]})"), parse_error);
    EXPECT_THROW(run_from_json(R"({"n":1,"k":1,"run":[3]})"), parse_error);
    EXPECT_THROW(run_from_json(R"({"n":1,"k":1,"run":["z1"]})"), parse_error);
}

TEST(ReportJson, ClosedFormReportIsMachineReadable) {
    const auto j = Json::parse(closed_form_report_to_json(closed_form_report(3, 2)).dump());
    ASSERT_TRUE(j.at("rows").is_array());
    const auto& first = j.at("rows").at(0);
    EXPECT_EQ(first.at("n"), 0);
    EXPECT_EQ(first.at("k"), 1);
    EXPECT_TRUE(first.at("recurrence").is_string());
    EXPECT_EQ(j.at("first_mismatch").at("n"), 1);
    EXPECT_EQ(j.at("first_mismatch").at("k"), 2);
}

TEST(ReportJson, EquationStatus) {
    EquationStatus s{"demo", SeriesTarget::c, {}, true, std::nullopt};
    s.residual.clean = false;
    s.residual.first_failure = std::pair{0, 2};
    s.residual.value = Rational(7, 3);
    const auto j = equation_status_to_json(s);
    EXPECT_EQ(j.at("status"), "fails");
    EXPECT_EQ(j.at("first_failure").at("value"), "7/3");
    EXPECT_TRUE(j.at("guess").is_null());
}
