#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bifol {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Leaf, point, label or generator name not present in the input.
struct UnknownId : Error {
    using Error::Error;
};

/// An operation was called outside its documented domain.
struct PreconditionError : Error {
    using Error::Error;
};

/// Distinct points that no leaf of the truncation separates.
struct DegenerateInput : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off) : Error(what), offset(off) {}
};

} // namespace bifol
