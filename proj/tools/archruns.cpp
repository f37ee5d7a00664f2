// Command-line front end: counting, sampling, ranking, enumeration, series
// verification and scatter export for (n,k)-arch processes.
//
// Exit status: 0 success, 1 usage error, 2 domain error, 3 verification failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "archruns/arch_model.hpp"
#include "archruns/closed_form.hpp"
#include "archruns/counting.hpp"
#include "archruns/io.hpp"
#include "archruns/random_source.hpp"
#include "archruns/ranking.hpp"
#include "archruns/sampler.hpp"
#include "archruns/selftest.hpp"
#include "archruns/series_lab.hpp"

namespace {

using namespace archruns;

enum Exit : int { ok = 0, usage = 1, domain = 2, verification = 3 };

struct Options {
    int n = -1;
    int k = -1;
    std::string rank_text;
    std::uint64_t seed = 0;
    std::uint64_t count = 1;
    std::uint64_t cap = 1'000'000;
    int order = 12;
    std::string format = "text";
    std::string cache;
    std::string run_text;
    bool quick = false;
    int criterion = 0;
    unsigned threads = 1;
    bool sci = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Shape require_shape(const Options& o) {
    if (o.n < 0 || o.k < 0) throw UsageError("--n and --k are required and must be non-negative");
    const Shape s{o.n, o.k};
    require_valid(s);
    return s;
}

Shape require_sampling_shape(const Options& o) {
    const auto s = require_shape(o);
    if (s.k > s.n) throw domain_error("only 0 <= k <= n is supported for " + to_string(s));
    return s;
}

Run read_run(const Options& o, Shape expected) {
    if (o.run_text.empty()) throw UsageError("--run is required");
    const auto first = o.run_text.find_first_not_of(" \t\n");
    if (first != std::string::npos && o.run_text[first] == '{') {
        auto parsed = run_from_json(o.run_text);
        if (parsed.shape.n != expected.n || parsed.shape.k != expected.k) {
            throw domain_error("run JSON is for " + to_string(parsed.shape) + ", not " + to_string(expected));
        }
        return std::move(parsed.run);
    }
    return parse_run(o.run_text);
}

void print_run(const Options& o, Shape s, const Run& run) {
    if (o.format == "json") {
        std::cout << run_to_json(s, run).dump() << '\n';
    } else if (o.format == "csv") {
        for (std::size_t i = 0; i < run.size(); ++i) std::cout << (i ? "," : "") << to_string(run[i]);
        std::cout << '\n';
    } else {
        std::cout << format_run(run) << '\n';
    }
}

std::string format_number(const Options& o, const BigInt& v) {
    if (!o.sci) return to_decimal(v);
    const mpf_class f(v, 128);
    std::vector<char> buf(64);
    gmp_snprintf(buf.data(), buf.size(), "%.6Fe", f.get_mpf_t());
    return buf.data();
}

/// Table for `s`, through the cache file when one is configured.
CountTable count_table(const Options& o, Shape s) {
    std::string path = o.cache;
    if (path.empty()) {
        if (const char* env = std::getenv("ARCHRUNS_CACHE")) path = env;
    }
    if (path.empty()) return build_count_table(s.n, s.k);

    if (std::ifstream in(path); in) {
        std::string why;
        if (auto table = load_cache(in, s, &why)) return std::move(*table);
        std::cerr << "archruns: cache " << path << " rejected (" << why << "), recomputing\n";
    }
    auto table = build_count_table(s.n, s.k);
    if (std::ofstream out(path); out) {
        save_cache(table, out);
    } else {
        std::cerr << "archruns: cannot write cache " << path << '\n';
    }
    return table;
}

int cmd_count(const Options& o) {
    const auto s = require_shape(o);
    const auto table = count_table(o, s);
    const auto& t = table.at(s.n, s.k);
    if (o.format == "json") {
        std::cout << Json{{"n", s.n}, {"k", s.k}, {"count", format_number(o, t)}}.dump() << '\n';
    } else if (o.format == "csv") {
        std::cout << s.n << ',' << s.k << ',' << format_number(o, t) << '\n';
    } else {
        std::cout << format_number(o, t) << '\n';
    }
    return ok;
}

int cmd_bounds(const Options& o) {
    const auto s = require_shape(o);
    const auto lo = lower_bound(s.n, s.k);
    const auto hi = upper_bound(s.n, s.k);
    if (o.format == "json") {
        std::cout << Json{{"n", s.n}, {"k", s.k}, {"lower", format_number(o, lo)}, {"upper", format_number(o, hi)}}.dump()
                  << '\n';
    } else if (o.format == "csv") {
        std::cout << s.n << ',' << s.k << ',' << format_number(o, lo) << ',' << format_number(o, hi) << '\n';
    } else {
        std::cout << format_number(o, lo) << ' ' << format_number(o, hi) << '\n';
    }
    return ok;
}

int cmd_enumerate(const Options& o) {
    const auto s = require_shape(o);
    for (const auto& run : enumerate_runs(s, o.cap)) print_run(o, s, run);
    return ok;
}

int cmd_sample(const Options& o) {
    const auto s = require_sampling_shape(o);
    if (o.threads == 0) throw UsageError("--threads must be positive");
    const auto table = count_table(o, s);

    // Sample i always uses substream (seed, i), so output does not depend on --threads.
    std::vector<Run> runs(o.count);
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(o.threads, std::max<std::uint64_t>(o.count, 1)));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t i = w; i < o.count; i += workers) {
                    auto source = RandomSource::substream(o.seed, i);
                    runs[i] = sample(table, s, source);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (const auto& run : runs) print_run(o, s, run);
    return ok;
}

int cmd_unrank(const Options& o) {
    const auto s = require_sampling_shape(o);
    if (o.rank_text.empty()) throw UsageError("--rank is required");
    const auto r = parse_bigint(o.rank_text);
    const auto table = count_table(o, s);
    const auto ptable = build_position_table(s.n, s.k);
    print_run(o, s, unrank(ptable, table, s, r));
    return ok;
}

int cmd_rank(const Options& o) {
    const auto s = require_sampling_shape(o);
    const auto run = read_run(o, s);
    const auto table = count_table(o, s);
    const auto ptable = build_position_table(s.n, s.k);
    const auto r = rank(ptable, table, s, run);
    if (o.format == "json") {
        std::cout << Json{{"n", s.n}, {"k", s.k}, {"rank", to_decimal(r)}}.dump() << '\n';
    } else {
        std::cout << to_decimal(r) << '\n';
    }
    return ok;
}

int cmd_prob(const Options& o) {
    const auto s = require_sampling_shape(o);
    const auto run = read_run(o, s);
    const auto table = count_table(o, s);
    const auto p = sample_probability(table, s, run);
    if (o.format == "json") {
        std::cout << Json{{"n", s.n}, {"k", s.k}, {"probability", to_decimal(p)}}.dump() << '\n';
    } else {
        std::cout << to_decimal(p) << '\n';
    }
    return ok;
}

int cmd_verify_series(const Options& o) {
    if (o.order < 2) throw UsageError("--order must be at least 2");
    const auto pde = pde_residual(o.order);
    const auto pde_failure = pde.first_nonzero();
    const auto statuses = verify_series({o.order, std::max(60, o.order)});

    // Hard failures: the PDE, or the A(z,u) cubic failing with no cubic found by the guesser.
    bool hard = pde_failure.has_value();
    for (const auto& st : statuses) {
        if (st.target == SeriesTarget::a && !st.residual.clean && !st.guess) hard = true;
    }

    if (o.format == "json") {
        Json eqs = Json::array();
        for (const auto& st : statuses) eqs.push_back(equation_status_to_json(st));
        Json pde_json = {{"checked_order", pde.z_order()}, {"status", pde_failure ? "fails" : "clean"}};
        if (pde_failure) {
            pde_json["first_failure"] = {{"z", pde_failure->first},
                                         {"u", pde_failure->second},
                                         {"value", to_decimal(pde.at(pde_failure->first, pde_failure->second))}};
        }
        std::cout << Json{{"pde", pde_json}, {"equations", eqs}}.dump(2) << '\n';
    } else {
        std::cout << "PDE: " << (pde_failure ? "fails" : "clean") << " on n, k <= " << pde.z_order() << '\n';
        for (const auto& st : statuses) {
            std::cout << st.name << " [" << to_string(st.target) << "]: ";
            if (st.residual.clean) {
                std::cout << "clean\n";
                continue;
            }
            const auto [z, u] = *st.residual.first_failure;
            std::cout << "first failure at z^" << z << " u^" << u << ", value " << to_decimal(st.residual.value) << '\n';
            if (st.guess_attempted) {
                std::cout << "  guess: " << (st.guess ? st.guess->to_string() : std::string("none")) << '\n';
            }
        }
    }
    return hard ? verification : ok;
}

int cmd_crosscheck(const Options& o) {
    const int n_max = o.n < 0 ? 8 : o.n;
    const int k_max = o.k < 0 ? 6 : o.k;
    const auto report = closed_form_report(n_max, k_max);
    if (o.format == "json") {
        std::cout << closed_form_report_to_json(report).dump(2) << '\n';
        return ok;
    }
    for (const auto& row : report.rows) {
        std::cout << row.shape.n << ' ' << row.shape.k << ' ' << to_decimal(row.recurrence) << ' ';
        bool first = true;
        for (const auto& [h, q] : row.closed.terms()) {
            std::cout << (first ? "" : "+") << to_decimal(q);
            if (h != 0) std::cout << "*pi^(" << h << "/2)";
            first = false;
        }
        if (first) std::cout << '0';
        std::cout << ' ' << (row.match ? "match" : "mismatch") << '\n';
    }
    if (report.first_mismatch) std::cerr << "first mismatch at " << to_string(*report.first_mismatch) << '\n';
    return ok;
}

int cmd_scatter(const Options& o) {
    const auto s = require_sampling_shape(o);
    const auto table = count_table(o, s);
    RandomSource source(o.seed);
    const auto cells = visited_cells(table, s, source, o.count);
    for (const auto& [k, n] : cells) std::cout << k << ',' << n << '\n';
    std::cerr << cells.size() << " distinct cells of " << table.size() << '\n';
    return ok;
}

int cmd_selftest(const Options& o) {
    std::optional<int> only;
    if (o.criterion != 0) only = o.criterion;
    bool failed = false;
    for (const auto& c : criteria()) {
        if (only && *only != c.id) continue;
        const auto r = run_criterion(c, {o.quick});
        failed = failed || r.verdict == Verdict::fail;
        std::cout << format_result(r) << std::endl;
    }
    return failed ? verification : ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Count, sample, rank and unrank runs of (n,k)-arch processes"};
    app.require_subcommand(1, 1);
    Options o;

    const auto shape_flags = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "trunk parameter n");
        sub->add_option("--k", o.k, "number of arches k");
    };
    const auto format_flag = [&](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(std::move(allowed)));
    };
    const auto cache_flag = [&](CLI::App* sub) {
        sub->add_option("--cache", o.cache, "count-table cache file (default: $ARCHRUNS_CACHE)");
    };

    std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;

    auto* count = app.add_subcommand("count", "print t(n,k)");
    shape_flags(count);
    format_flag(count, {"text", "json", "csv"});
    cache_flag(count);
    count->add_flag("--sci", o.sci, "scientific floating form");
    commands.emplace_back(count, cmd_count);

    auto* bounds = app.add_subcommand("bounds", "print the lower and upper bounds on t(n,k)");
    shape_flags(bounds);
    format_flag(bounds, {"text", "json", "csv"});
    bounds->add_flag("--sci", o.sci, "scientific floating form");
    commands.emplace_back(bounds, cmd_bounds);

    auto* enumerate = app.add_subcommand("enumerate", "list every run");
    shape_flags(enumerate);
    format_flag(enumerate, {"text", "json", "csv"});
    enumerate->add_option("--cap", o.cap, "fail instead of listing more runs than this");
    commands.emplace_back(enumerate, cmd_enumerate);

    auto* sample_cmd = app.add_subcommand("sample", "uniformly random runs (k <= n)");
    shape_flags(sample_cmd);
    format_flag(sample_cmd, {"text", "json", "csv"});
    cache_flag(sample_cmd);
    sample_cmd->add_option("--seed", o.seed, "random seed");
    sample_cmd->add_option("--count", o.count, "number of samples");
    sample_cmd->add_option("--threads", o.threads, "worker threads");
    commands.emplace_back(sample_cmd, cmd_sample);

    auto* unrank_cmd = app.add_subcommand("unrank", "the run of a given rank (k <= n)");
    shape_flags(unrank_cmd);
    format_flag(unrank_cmd, {"text", "json", "csv"});
    cache_flag(unrank_cmd);
    unrank_cmd->add_option("--rank", o.rank_text, "decimal rank");
    commands.emplace_back(unrank_cmd, cmd_unrank);

    auto* rank_cmd = app.add_subcommand("rank", "the rank of a run (k <= n)");
    shape_flags(rank_cmd);
    format_flag(rank_cmd, {"text", "json"});
    cache_flag(rank_cmd);
    rank_cmd->add_option("--run", o.run_text, "run as tokens or JSON");
    commands.emplace_back(rank_cmd, cmd_rank);

    auto* prob = app.add_subcommand("prob", "exact probability that the sampler returns a run");
    shape_flags(prob);
    format_flag(prob, {"text", "json"});
    cache_flag(prob);
    prob->add_option("--run", o.run_text, "run as tokens or JSON");
    commands.emplace_back(prob, cmd_prob);

    auto* verify = app.add_subcommand("verify-series", "check the generating-function equations");
    format_flag(verify, {"text", "json"});
    verify->add_option("--order", o.order, "bivariate truncation order");
    commands.emplace_back(verify, cmd_verify_series);

    auto* cross = app.add_subcommand("crosscheck-closed-form", "closed form versus recurrence");
    cross->add_option("--n", o.n, "largest n (default 8)");
    cross->add_option("--k", o.k, "largest k (default 6)");
    format_flag(cross, {"text", "json"});
    commands.emplace_back(cross, cmd_crosscheck);

    auto* scatter = app.add_subcommand("scatter", "table cells visited by the sampler, as CSV k,n");
    shape_flags(scatter);
    cache_flag(scatter);
    scatter->add_option("--seed", o.seed, "random seed");
    scatter->add_option("--count", o.count, "number of samples");
    commands.emplace_back(scatter, cmd_scatter);

    auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");
    selftest->add_flag("--quick", o.quick, "small oracle sizes only");
    selftest->add_option("--criterion", o.criterion, "run a single criterion");
    commands.emplace_back(selftest, cmd_selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        for (const auto& [sub, fn] : commands) {
            if (sub->parsed()) return fn(o);
        }
        return usage;
    } catch (const UsageError& e) {
        std::cerr << "archruns: " << e.what() << '\n';
        return usage;
    } catch (const parse_error& e) {
        std::cerr << "archruns: " << e.what() << '\n';
        return usage;
    } catch (const invariant_error& e) {
        std::cerr << "archruns: internal invariant failed: " << e.what() << '\n';
        return verification;
    } catch (const std::exception& e) {
        std::cerr << "archruns: " << e.what() << '\n';
        return domain;
    }
}
