// errors.hpp -- error taxonomy shared by the library, the C API, and the CLI.
#ifndef GGR_ERRORS_HPP_
#define GGR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ggr {

enum class ErrorKind {
    Usage,                   // bad arguments to an API call or CLI flag
    Io,                      // file system failure
    Parse,                   // malformed grammar/transducer/partition text
    Validation,              // well-formed input violating a structural rule
    Alphabet,                // operands built over incompatible alphabets
    Domain,                  // variable-domain misuse (unknown name, bad regex)
    Undefined,               // a transduction was required at an undefined point
    Growth,                  // growth-bound violation or failed bound derivation
    NoRuleMatches,           // interpretation: no rule matches the input
    DepthExceeded,           // interpretation: recursion depth limit hit
    NonDecreasingRecursion,  // interpretation: recursive argument not shorter
    AmbiguousMatch,          // interpretation: unique match required, several found
    StateLimit,              // automaton construction exceeded its state cap
    Internal,                // invariant breakage inside the library
};

// Stable lower-case name used in machine-parsable error lines.
const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace ggr

#endif // GGR_ERRORS_HPP_
