#include "ggr/errors.hpp"

namespace ggr {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Alphabet: return "alphabet";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Undefined: return "undefined";
        case ErrorKind::Growth: return "growth";
        case ErrorKind::NoRuleMatches: return "no-rule-matches";
        case ErrorKind::DepthExceeded: return "depth-exceeded";
        case ErrorKind::NonDecreasingRecursion: return "non-decreasing-recursion";
        case ErrorKind::AmbiguousMatch: return "ambiguous-match";
        case ErrorKind::StateLimit: return "state-limit";
        case ErrorKind::Internal: return "internal";
    }
    return "internal";
}

} // namespace ggr
