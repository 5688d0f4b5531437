#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};
struct ParamError : Error {
    explicit ParamError(const std::string& msg) : Error(msg) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};
struct DivergenceError : Error {
    explicit DivergenceError(const std::string& msg) : Error(msg) {}
};
struct NonConvergenceError : Error {
    explicit NonConvergenceError(const std::string& msg) : Error(msg) {}
};
struct ValidityError : Error {
    explicit ValidityError(const std::string& msg) : Error(msg) {}
};
struct BranchError : Error {
    explicit BranchError(const std::string& msg) : Error(msg) {}
};
struct NearPoleError : Error {
    explicit NearPoleError(const std::string& msg) : Error(msg) {}
};
struct PatternError : Error {
    explicit PatternError(const std::string& msg) : Error(msg) {}
};
struct UnsupportedSignature : Error {
    explicit UnsupportedSignature(const std::string& msg) : Error(msg) {}
};
struct QuadratureError : Error {
    explicit QuadratureError(const std::string& msg) : Error(msg) {}
};
struct UnsupportedDimension : Error {
    explicit UnsupportedDimension(const std::string& msg) : Error(msg) {}
};
struct IndexError : Error {
    explicit IndexError(const std::string& msg) : Error(msg) {}
};

} // namespace fraclap
