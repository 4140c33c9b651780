#pragma once

#include <stdexcept>
#include <string>

namespace conevol {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct DegreeMismatch : std::invalid_argument {
    explicit DegreeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

struct RankDeficiency : std::runtime_error {
    explicit RankDeficiency(const std::string& what) : std::runtime_error(what) {}
};

struct BisectionBracketFailure : std::runtime_error {
    explicit BisectionBracketFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conevol
