#pragma once

// Generating-function checks for the run counts:
//   A(z,u) = sum t(n,k)/k! z^n u^k (t continued past k = n+1),
//   C(u)   = u A_u(0,u) + 2 A(0,u),
//   D_i(u) = sum t(k+i,k)/k! u^k.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "asymptotics.hpp"
#include "counting.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "series.hpp"

namespace archruns {

namespace detail {

/// t(n,k) continued by the recurrence, for 0 <= n <= n_max, 0 <= k <= k_max.
inline std::vector<std::vector<Rational>> extended_grid(int n_max, int k_max) {
    const int width = n_max + k_max;
    std::vector<std::vector<Rational>> t(static_cast<std::size_t>(width) + 1,
                                         std::vector<Rational>(static_cast<std::size_t>(k_max) + 1));
    for (int n = 0; n <= width; ++n) t[static_cast<std::size_t>(n)][0] = 1;
    for (int k = 1; k <= k_max; ++k) {
        for (int n = 0; n + k <= width; ++n) {
            const auto un = static_cast<std::size_t>(n);
            const auto uk = static_cast<std::size_t>(k);
            Rational v = Rational(n + 2 * k - 1) * t[un][uk - 1] + Rational(n - k) * t[un + 1][uk - 1];
            v /= 2;
            t[un][uk] = std::move(v);
        }
    }
    return t;
}

inline Rational inverse_factorial(int k) { return Rational(1) / Rational(factorial(k)); }

}  // namespace detail

inline BiSeries a_series(int order) {
    if (order < 1) throw domain_error("a_series needs order >= 1");
    const auto t = detail::extended_grid(order, order);
    auto out = BiSeries::square(order);
    for (int k = 0; k <= order; ++k) {
        const auto inv = detail::inverse_factorial(k);
        for (int n = 0; n <= order; ++n) out.at(n, k) = t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] * inv;
    }
    return out;
}

/// A(0,u) alone, cheaper than a_series for long univariate checks.
inline UniSeries a0_series(int order) {
    const auto t = detail::extended_grid(0, order);
    auto out = UniSeries::zero(order);
    for (int k = 0; k <= order; ++k) out[k] = t[0][static_cast<std::size_t>(k)] * detail::inverse_factorial(k);
    return out;
}

/// [u^k] C = (k+2) t(0,k) / k!
inline UniSeries c_series(int order) {
    auto a0 = a0_series(order);
    for (int k = 0; k <= order; ++k) a0[k] *= (k + 2);
    return a0;
}

/// (2zu - 2z - u) A_u + (z - 2) A + z(z+1) A_z + C(u), on n, k <= order - 1.
/// C is taken from the z^0 column of the series passed in.
inline BiSeries pde_residual(const BiSeries& a) {
    const int order = std::min(a.z_order(), a.u_order());
    if (order < 2) throw domain_error("pde_residual needs order >= 2");
    const int region = order - 1;
    const auto z = PolyXY::z();
    const auto u = PolyXY::u();

    const auto au = a.d_du().truncated(region, region);
    const auto az = a.d_dz().truncated(region, region);
    const auto a_cut = a.truncated(region, region);

    BiSeries c(region, region);
    for (int k = 0; k <= region; ++k) c.at(0, k) = a.at(0, k) * (k + 2);

    return multiply(2 * z * u - 2 * z - u, au) + multiply(z - 2, a_cut) + multiply(z * (z + 1), az) + c;
}

inline BiSeries pde_residual(int order) { return pde_residual(a_series(order)); }

/// sum_k t(k+i, k)/k! u^k, read from count tables (zero where k+i < 0).
inline UniSeries diagonal_series(int i, int order) {
    if (i < -1) throw domain_error("diagonal_series needs i >= -1");
    auto out = UniSeries::zero(order);
    for (int k = 0; k <= order; ++k) {
        if (k + i < 0) continue;
        out[k] = Rational(runs_count(k + i, k)) * detail::inverse_factorial(k);
    }
    return out;
}

/// Closed form of D_0 on (0, rho), the branch analytic at 0.
inline double d0_closed_form(double u) {
    const double rho = dominant_singularity();
    if (!(u > 0.0 && u < rho)) throw domain_error("d0_closed_form needs 0 < u < rho");
    const double lin = 1.0 - 3.0 * u;
    const double disc = 1.0 - 3.0 * u - 2.25 * u * u;
    const double arg = (6.0 * u - 1.0) / (std::numbers::sqrt2 * lin) * std::sqrt(disc / lin);
    return std::numbers::sqrt2 * std::sqrt(lin / disc) * std::cos(std::acos(arg) / 3.0);
}

// ---------------------------------------------------------------------------

enum class SeriesTarget { a0, c, a, d0 };

inline const char* to_string(SeriesTarget t) {
    switch (t) {
        case SeriesTarget::a0: return "A(0,u)";
        case SeriesTarget::c: return "C(u)";
        case SeriesTarget::a: return "A(z,u)";
        case SeriesTarget::d0: return "D0(u)";
    }
    return "?";
}

struct EquationEntry {
    std::string name;
    SeriesTarget target;
    std::variant<PolyXY, LinearOde> equation;
    int guess_dy = 3;  ///< degrees tried by the guesser if the check fails
    int guess_du = 3;
};

/// Reference equations, with coefficients kept exactly as given (no corrections).
inline std::vector<EquationEntry> equation_catalog() {
    const auto Y = PolyXY::Y();
    const auto z = PolyXY::z();
    const auto u = PolyXY::u();
    const auto q = 8 * u.pow(3) - 15 * u.pow(2) + 12 * u - 4;
    const auto w = 9 * u.pow(2) + 12 * u - 4;

    std::vector<EquationEntry> out;
    out.push_back({"A(0,u) cubic", SeriesTarget::a0,
                   q * Y.pow(3) + (12 * u.pow(2) - 12 * u + 6) * Y - 2 * u.pow(3), 3, 3});
    out.push_back({"C(u) cubic", SeriesTarget::c,
                   q.pow(3) * Y.pow(3) +
                       48 * (36 * u.pow(6) - 120 * u.pow(5) + 202 * u.pow(4) - 199 * u.pow(3) + 123 * u.pow(2) - 44 * u + 8) *
                           (u - 1).pow(2) * Y +
                       32 * (9 * u.pow(2) - 12 * u + 8) * (u - 1).pow(3),
                   3, 9});
    out.push_back({"C(u) ODE", SeriesTarget::c,
                   LinearOde{{4 * (24 * u.pow(2) + 3 * u + 1), -4 * u * (84 * u.pow(2) - 3 * u + 1),
                              -2 * u.pow(2) * (216 * u.pow(2) - 151 * u + 13),
                              -2 * u.pow(2) * (58 * u.pow(3) - 75 * u.pow(2) + 33 * u - 2), -u.pow(3) * q},
                             -8 * (3 * u + 1)},
                   3, 9});
    out.push_back({"A(z,u) cubic", SeriesTarget::a,
                   q * (z.pow(3) + 3 * z.pow(2) + 6 * z * u - 3 * z - 1) * Y.pow(3) + 6 * z.pow(2) * q * Y.pow(2) +
                       6 * (12 * z * u.pow(3) - 18 * z * u.pow(2) - 2 * u.pow(2) + 13 * z * u + 2 * u - 3 * z - 1) * Y + 2,
                   3, 3});
    // The linear coefficient uses "6u", not "6zu"; kept as given. Checked on z = 0 against D0.
    out.push_back({"B(z,u) cubic", SeriesTarget::d0,
                   w * (z.pow(3) + 3 * z.pow(2) + 6 * u - 3 * z - 1) * Y.pow(3) + 6 * z.pow(2) * w * Y.pow(2) +
                       6 * (18 * u.pow(2) * z - 18 * u.pow(2) + 6 * u * z + 9 * u - 3 * z - 1) * Y +
                       2 * (6 * u - 1).pow(2),
                   3, 3});
    return out;
}

struct EquationStatus {
    std::string name;
    SeriesTarget target;
    ResidualReport residual;
    bool guess_attempted = false;
    std::optional<PolyXY> guess;
};

struct SeriesCheckOptions {
    int bivariate_order = 12;
    int univariate_order = 60;
};

inline std::vector<EquationStatus> verify_series(const SeriesCheckOptions& opt = {}) {
    const auto a0 = a0_series(opt.univariate_order);
    const auto c = c_series(opt.univariate_order);
    const auto d0 = diagonal_series(0, opt.univariate_order);

    const auto uni_target = [&](SeriesTarget t) -> const UniSeries& {
        switch (t) {
            case SeriesTarget::c: return c;
            case SeriesTarget::d0: return d0;
            default: return a0;
        }
    };

    std::vector<EquationStatus> out;
    for (const auto& entry : equation_catalog()) {
        EquationStatus status{entry.name, entry.target, {}, false, std::nullopt};
        if (const auto* ode = std::get_if<LinearOde>(&entry.equation)) {
            status.residual = ode_residual(uni_target(entry.target), *ode);
        } else {
            const auto& poly = std::get<PolyXY>(entry.equation);
            if (entry.target == SeriesTarget::a) {
                status.residual = poly_residual(a_series(opt.bivariate_order), poly);
            } else {
                status.residual = poly_residual(uni_target(entry.target), poly.at_z_zero());
            }
        }
        if (!status.residual.clean) {
            status.guess_attempted = true;
            status.guess = guess_algebraic(uni_target(entry.target), entry.guess_dy, entry.guess_du);
        }
        out.push_back(std::move(status));
    }
    return out;
}

}  // namespace archruns
