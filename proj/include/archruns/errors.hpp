#pragma once

#include <stdexcept>

namespace archruns {

/// Input outside the supported (n,k) domain, or a run/shape mismatch.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// A brute-force routine would exceed its caller-supplied cap.
struct overflow_error : std::overflow_error {
    using std::overflow_error::overflow_error;
};

/// Requested cell is not stored in a memo table.
struct lookup_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Rank outside [0, t(n,k)).
struct rank_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Malformed run / action text.
struct parse_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An internal identity was violated (e.g. odd numerator in the recurrence).
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace archruns
