#pragma once

// Acceptance checks, shared by `archruns selftest` and the acceptance test
// binary. Each check returns a verdict plus a one-line detail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "arch_model.hpp"
#include "asymptotics.hpp"
#include "closed_form.hpp"
#include "counting.hpp"
#include "io.hpp"
#include "random_source.hpp"
#include "ranking.hpp"
#include "sampler.hpp"
#include "series_lab.hpp"

namespace archruns {

enum class Verdict { pass, fail, skipped };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::skipped: return "SKIP";
    }
    return "?";
}

struct CriterionResult {
    int id = 0;
    std::string title;
    Verdict verdict = Verdict::fail;
    std::string detail;
    double seconds = 0.0;
};

struct SelftestOptions {
    bool quick = false;  ///< oracle sizes <= 1e4, scale check skipped
};

namespace detail {

struct Check {
    Verdict verdict;
    std::string detail;
};

inline Check pass(std::string detail) { return {Verdict::pass, std::move(detail)}; }
inline Check fail(std::string detail) { return {Verdict::fail, std::move(detail)}; }

template <class... Parts>
std::string cat(const Parts&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}

inline Check oracle_equality(const SelftestOptions& opt) {
    const std::uint64_t cap = opt.quick ? 10'000 : 1'000'000;
    // The down-set oracle handles up to 63 actions; k = 1 reaches that at n = 61.
    const int n_max = opt.quick ? 20 : 61;
    int shapes = 0;
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= n + 1; ++k) {
            const Shape s{n, k};
            if (s.action_count() > 63) break;
            BigInt brute;
            try {
                brute = count_runs_brute(s, cap);
            } catch (const overflow_error&) {
                break;  // t(n,k) grows with k once k >= 1
            }
            if (brute != runs_count(n, k)) {
                return fail(cat("t", to_string(s), ": brute ", brute, " vs recurrence ", runs_count(n, k)));
            }
            ++shapes;
        }
    }
    return pass(cat(shapes, " shapes with n <= ", n_max, " and at most ", cap, " runs agree"));
}

inline Check diagonal_sequences() {
    struct Diagonal {
        int offset;
        int first_k;
        std::vector<const char*> terms;
    };
    const std::vector<Diagonal> diagonals = {
        {-1, 2, {"1", "12", "170", "2940", "60760", "1466640", "40566680", "1266064800", "44030186200", "1688858371200"}},
        {0, 1, {"1", "5", "44", "550", "8890", "176120", "4130000", "111856360", "3435632200", "117991273400"}},
        {1, 1, {"2", "11", "100", "1270", "20720", "413000", "9726640", "264279400", "8137329200", "280012733000"}},
        {2, 1, {"3", "19", "186", "2474", "41670", "850240", "20386800", "561863960", "17501627640", "608063465800"}},
    };
    for (const auto& d : diagonals) {
        for (std::size_t j = 0; j < d.terms.size(); ++j) {
            const int k = d.first_k + static_cast<int>(j);
            const int n = k + d.offset;
            if (runs_count(n, k) != parse_bigint(d.terms[j])) {
                return fail(cat("t(", n, ",", k, ") = ", runs_count(n, k), ", expected ", d.terms[j]));
            }
        }
    }
    return pass("40 reference diagonal terms reproduced");
}

inline Check unranking_bijection() {
    for (const Shape s : {Shape{2, 2}, Shape{4, 3}, Shape{5, 4}, Shape{4, 4}, Shape{6, 5}}) {
        const auto table = build_count_table(s.n, s.k);
        const auto ptable = build_position_table(s.n, s.k);
        const auto oracle = enumerate_runs(s, 1'000'000);
        const std::set<Run> expected(oracle.begin(), oracle.end());
        std::set<Run> seen;
        for (BigInt r = 0; r < table.at(s.n, s.k); ++r) {
            auto run = unrank(ptable, table, s, r);
            if (rank(ptable, table, s, run) != r) return fail(cat("rank(unrank(", r, ")) != ", r, " in ", to_string(s)));
            if (!seen.insert(std::move(run)).second) return fail(cat("duplicate run at rank ", r, " in ", to_string(s)));
        }
        if (seen != expected) return fail(cat("unranked set differs from enumeration in ", to_string(s)));
    }
    return pass("5 shapes: unrank is onto the enumerated runs, rank inverts it");
}

inline const Run& worked_run() {
    static const Run run = parse_run("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4");
    return run;
}

inline Check worked_example() {
    const Shape s{5, 4};
    const auto table = build_count_table(5, 4);
    const auto ptable = build_position_table(5, 4);
    const auto run = unrank(ptable, table, s, 479);
    if (run != worked_run()) return fail("unrank(5,4,479) = " + format_run(run));
    const auto r = rank(ptable, table, s, worked_run());
    if (r != 479) return fail(cat("rank of the example run = ", r));
    return pass("unrank(5,4,479) and its rank round-trip");
}

inline Check exact_uniformity() {
    std::size_t runs = 0;
    for (const Shape s : {Shape{2, 2}, Shape{4, 3}, Shape{4, 4}, Shape{5, 4}}) {
        const auto table = build_count_table(s.n, s.k);
        const Rational expected(BigInt(1), table.at(s.n, s.k));
        for (const auto& run : enumerate_runs(s, 1'000'000)) {
            const auto p = sample_probability(table, s, run);
            if (p != expected) return fail(cat("P(", format_run(run), ") = ", p, " in ", to_string(s)));
            ++runs;
        }
    }
    return pass(cat(runs, " runs each sampled with probability exactly 1/t(n,k)"));
}

inline Check statistical_uniformity() {
    const Shape s{4, 3};
    constexpr std::uint64_t samples = 100'000;
    const auto table = build_count_table(s.n, s.k);
    const auto runs = enumerate_runs(s, 1'000);
    std::map<Run, std::size_t> index;
    for (std::size_t i = 0; i < runs.size(); ++i) index.emplace(runs[i], i);

    std::vector<std::uint64_t> hits(runs.size(), 0);
    RandomSource source(20240601);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const auto run = sample(table, s, source);
        const auto it = index.find(run);
        if (it == index.end() || !validate_run(s, run)) return fail("invalid sample " + format_run(run));
        ++hits[it->second];
    }
    const double expected = static_cast<double>(samples) / static_cast<double>(runs.size());
    double chi2 = 0.0;
    for (auto h : hits) chi2 += (static_cast<double>(h) - expected) * (static_cast<double>(h) - expected) / expected;
    const boost::math::chi_squared dist(static_cast<double>(runs.size() - 1));
    const double critical = boost::math::quantile(boost::math::complement(dist, 0.001));
    const auto detail = cat("chi2 = ", chi2, " against ", critical, " (df ", runs.size() - 1, ", alpha 0.001)");
    return chi2 <= critical ? pass(detail) : fail(detail);
}

inline Check bounds_sandwich() {
    for (int n = 0; n <= 30; ++n) {
        const auto table = build_count_table(n, n);
        for (int k = 0; k <= n; ++k) {
            const auto& t = table.at(n, k);
            if (t < lower_bound(n, k) || t > upper_bound(n, k)) return fail(cat("t(", n, ",", k, ") = ", t, " outside bounds"));
        }
    }
    return pass("lower <= t(n,k) <= upper for all 0 <= k <= n <= 30");
}

inline Check pde_check() {
    const auto residual = pde_residual(15);
    if (const auto at = residual.first_nonzero()) {
        return fail(cat("first non-zero coefficient at z^", at->first, " u^", at->second, ": ",
                        residual.at(at->first, at->second)));
    }
    return pass(cat("zero on n, k <= ", residual.z_order()));
}

inline Check cubic_check() {
    const auto catalog = equation_catalog();
    const auto entry = std::find_if(catalog.begin(), catalog.end(), [](const auto& e) { return e.target == SeriesTarget::a; });
    const auto& poly = std::get<PolyXY>(entry->equation);
    const auto report = poly_residual(a_series(12), poly);
    if (report.clean) return pass(cat("catalog cubic vanishes on n, k <= ", report.z_order));
    const auto at = *report.first_failure;
    const auto guess = guess_algebraic(a0_series(60), 3, 3);
    const auto where = cat("catalog cubic first fails at z^", at.first, " u^", at.second, " (", report.value, ")");
    if (guess) return pass(where + "; guesser found " + guess->to_string());
    return fail(where + "; guesser found no cubic");
}

inline Check closed_form_check() {
    for (int n = 1; n <= 20; ++n) {
        const auto v = closed_form(n, 1).single();
        if (!v || v->h != 0 || v->q != n) return fail(cat("closed_form(", n, ",1) is not ", n));
    }
    const auto report = closed_form_report(8, 6);
    const auto text = closed_form_report_to_json(report).dump();
    const auto parsed = Json::parse(text);
    std::size_t matches = 0;
    for (const auto& row : parsed.at("rows")) matches += row.at("match").get<bool>() ? 1 : 0;
    return pass(cat("k = 1 exact for n <= 20; report(8,6) has ", parsed.at("rows").size(), " rows, ", matches,
                    " matching the recurrence"));
}

inline Check asymptotics_check() {
    const auto ratio = [](int i, int k) {
        return std::exp(log_of(runs_count(k + i, k)) - asymptotic_log_estimate(i, k));
    };
    const double r99 = ratio(0, 9);
    if (std::abs(r99 - 1.0) > 0.02) return fail(cat("t(9,9) ratio ", r99));
    std::vector<std::string> misses;
    for (int i = -1; i <= 1; ++i) {
        for (int k = 8; k <= 60; ++k) {
            const double r = ratio(i, k);
            if (std::abs(r - 1.0) > 0.1) misses.push_back(cat("i=", i, " k=", k, " ratio ", r));
        }
        double previous = INFINITY;
        for (int k = 20; k <= 200; k += 20) {
            const double distance = std::abs(ratio(i, k) - 1.0);
            if (distance > previous) misses.push_back(cat("i=", i, " distance grows at k=", k));
            previous = distance;
        }
    }
    if (!misses.empty()) {
        std::string detail = cat(misses.size(), " point(s) outside: ");
        for (std::size_t j = 0; j < misses.size(); ++j) detail += (j ? "; " : "") + misses[j];
        return fail(detail);
    }
    return pass(cat("t(9,9) ratio ", r99, "; 10% band on [8,60] and monotone on [20,200]"));
}

inline Check scale_check() {
    const Shape s{1000, 1000};
    const auto table = build_count_table(s.n, s.k);
    RandomSource source(1000);
    std::set<std::pair<int, int>> cells;
    constexpr int samples = 1000;
    for (int i = 0; i < samples; ++i) {
        const auto draws = sample_draws(table, s, source);
        int leaf = s.n;
        for (const auto& d : draws) {
            cells.emplace(d.shape.k, d.shape.n);
            leaf += d.trunk_split ? 1 : 0;
        }
        cells.emplace(0, leaf);
        if (i % 100 == 0 && !validate_run(s, build_from_draws(s, draws))) return fail("invalid sample");
    }
    const double share = static_cast<double>(cells.size()) / static_cast<double>(table.size());
    const auto detail = cat(cells.size(), " distinct cells of ", table.size(), " (", share * 100.0, "%)");
    return share < 0.15 ? pass(detail) : fail(detail);
}

}  // namespace detail

struct Criterion {
    int id;
    const char* title;
    std::function<detail::Check(const SelftestOptions&)> run;
    bool heavy = false;  ///< skipped in quick mode
};

inline const std::vector<Criterion>& criteria() {
    using Opt = const SelftestOptions&;
    static const std::vector<Criterion> list = {
        {1, "oracle equality", [](Opt o) { return detail::oracle_equality(o); }},
        {2, "diagonal sequences", [](Opt) { return detail::diagonal_sequences(); }},
        {3, "unranking bijection", [](Opt) { return detail::unranking_bijection(); }},
        {4, "worked example", [](Opt) { return detail::worked_example(); }},
        {5, "exact uniformity", [](Opt) { return detail::exact_uniformity(); }},
        {6, "statistical uniformity", [](Opt) { return detail::statistical_uniformity(); }},
        {7, "bounds sandwich", [](Opt) { return detail::bounds_sandwich(); }},
        {8, "PDE residual", [](Opt) { return detail::pde_check(); }},
        {9, "A(z,u) cubic", [](Opt) { return detail::cubic_check(); }},
        {10, "closed-form crosscheck", [](Opt) { return detail::closed_form_check(); }},
        {11, "asymptotics", [](Opt) { return detail::asymptotics_check(); }},
        {12, "scale (1000,1000)", [](Opt) { return detail::scale_check(); }, true},
    };
    return list;
}

inline CriterionResult run_criterion(const Criterion& c, const SelftestOptions& opt) {
    CriterionResult out{c.id, c.title, Verdict::skipped, "skipped in quick mode", 0.0};
    if (opt.quick && c.heavy) return out;
    const auto start = std::chrono::steady_clock::now();
    try {
        auto check = c.run(opt);
        out.verdict = check.verdict;
        out.detail = std::move(check.detail);
    } catch (const std::exception& e) {
        out.verdict = Verdict::fail;
        out.detail = std::string("exception: ") + e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Runs every criterion, or only `only` when given.
inline std::vector<CriterionResult> run_selftest(const SelftestOptions& opt, std::optional<int> only = std::nullopt) {
    std::vector<CriterionResult> out;
    for (const auto& c : criteria()) {
        if (only && *only != c.id) continue;
        out.push_back(run_criterion(c, opt));
    }
    if (only && out.empty()) throw domain_error("no acceptance criterion " + std::to_string(*only));
    return out;
}

inline std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << "[" << to_string(r.verdict) << "] " << r.id << ". " << r.title << " (" << std::fixed;
    os.precision(2);
    os << r.seconds << " s): " << r.detail;
    return os.str();
}

}  // namespace archruns
