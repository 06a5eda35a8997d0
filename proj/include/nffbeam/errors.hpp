// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nffbeam {

/// Rejected input: a precondition or config invariant was violated.
/// CLI maps this class to exit code 2.
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Source and observation point closer than the geometric standoff.
/// CLI maps this class to exit code 3.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure while reading or writing artifacts.
/// CLI maps this class to exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nffbeam
