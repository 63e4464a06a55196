#ifndef LF_ERRORS_HPP
#define LF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the expression parser; `offset` is the byte position in the input.
struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

struct UnknownFunctionError : SyntaxError {
    UnknownFunctionError(const std::string& name, std::size_t offset)
        : SyntaxError("unknown function '" + name + "'", offset), name(name) {}
    std::string name;
};

struct IndexOutOfRangeError : SyntaxError {
    IndexOutOfRangeError(const std::string& ident, int n, std::size_t offset)
        : SyntaxError("index of '" + ident + "' exceeds declared dimension n=" + std::to_string(n),
                      offset) {}
};

struct UnboundSymbolError : Error {
    explicit UnboundSymbolError(const std::string& sym)
        : Error("unbound symbol '" + sym + "'"), symbol(sym) {}
    std::string symbol;
};

// Evaluation outside a function's domain (ln of non-positive, 0^negative, ...).
struct DomainError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct SingularHessianError : Error {
    using Error::Error;
};

struct OverflowError : Error {
    using Error::Error;
};

struct StepLimitError : Error {
    using Error::Error;
};

struct UnsupportedClassError : Error {
    using Error::Error;
};

struct DegenerateVariationError : Error {
    using Error::Error;
};

struct NoCompletionError : Error {
    using Error::Error;
};

struct AnsatzError : Error {
    using Error::Error;
};

}  // namespace lf

#endif
