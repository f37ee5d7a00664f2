#pragma once

// JSON forms of runs and reports. Numbers that can exceed a machine word are
// written as decimal strings.

#include <string>
#include <vector>

#include "json.hpp"

#include "arch_model.hpp"
#include "closed_form.hpp"
#include "errors.hpp"
#include "series_lab.hpp"

namespace archruns {

using Json = nlohmann::json;

/// {"n":N,"k":K,"run":["a1",...]}
inline Json run_to_json(Shape s, std::span<const Action> run) {
    Json tokens = Json::array();
    for (const auto& a : run) tokens.push_back(to_string(a));
    return {{"n", s.n}, {"k", s.k}, {"run", std::move(tokens)}};
}

struct ShapedRun {
    Shape shape;
    Run run;
};

inline ShapedRun run_from_json(const Json& j) {
    try {
        ShapedRun out{{j.at("n").get<int>(), j.at("k").get<int>()}, {}};
        for (const auto& token : j.at("run")) out.run.push_back(parse_action(token.get<std::string>()));
        return out;
    } catch (const Json::exception& e) {
        throw parse_error(std::string("run JSON: ") + e.what());
    }
}

inline ShapedRun run_from_json(std::string_view text) {
    try {
        return run_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
        throw parse_error(std::string("run JSON: ") + e.what());
    }
}

inline ShapedRun run_from_json(const std::string& text) { return run_from_json(std::string_view(text)); }
inline ShapedRun run_from_json(const char* text) { return run_from_json(std::string_view(text)); }

inline Json pi_sum_to_json(const PiSum& v) {
    Json terms = Json::array();
    for (const auto& [h, q] : v.terms()) terms.push_back({{"pi_half_exponent", h}, {"coefficient", to_decimal(q)}});
    return terms;
}

inline Json closed_form_report_to_json(const ClosedFormReport& report) {
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"n", row.shape.n},
                        {"k", row.shape.k},
                        {"closed_form", pi_sum_to_json(row.closed)},
                        {"residual_pi_exponents", row.closed.residual_exponents()},
                        {"recurrence", to_decimal(row.recurrence)},
                        {"match", row.match}});
    }
    Json out = {{"rows", std::move(rows)}, {"first_mismatch", nullptr}};
    if (report.first_mismatch) out["first_mismatch"] = {{"n", report.first_mismatch->n}, {"k", report.first_mismatch->k}};
    return out;
}

inline Json equation_status_to_json(const EquationStatus& s) {
    Json out = {{"name", s.name},
                {"series", to_string(s.target)},
                {"status", s.residual.clean ? "clean" : "fails"},
                {"checked_z_order", s.residual.z_order},
                {"checked_u_order", s.residual.u_order}};
    if (s.residual.first_failure) {
        out["first_failure"] = {{"z", s.residual.first_failure->first},
                                {"u", s.residual.first_failure->second},
                                {"value", to_decimal(s.residual.value)}};
    }
    if (s.guess_attempted) out["guess"] = s.guess ? Json(s.guess->to_string()) : Json(nullptr);
    return out;
}

}  // namespace archruns
