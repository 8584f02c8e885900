#pragma once

#include <stdexcept>
#include <string>

namespace isotm {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMetricError : std::runtime_error {
    explicit SingularMetricError(const std::string& what) : std::runtime_error(what) {}
};

struct DegeneratePlaneError : std::runtime_error {
    explicit DegeneratePlaneError(const std::string& what) : std::runtime_error(what) {}
};

struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

struct PointMismatchError : std::runtime_error {
    explicit PointMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct NotUnitFiberError : std::runtime_error {
    explicit NotUnitFiberError(const std::string& what) : std::runtime_error(what) {}
};

struct NotUnitFieldError : std::runtime_error {
    explicit NotUnitFieldError(const std::string& what) : std::runtime_error(what) {}
};

struct NotRadialError : std::runtime_error {
    explicit NotRadialError(const std::string& what) : std::runtime_error(what) {}
};

struct JetRequiredError : std::runtime_error {
    explicit JetRequiredError(const std::string& what) : std::runtime_error(what) {}
};

struct JetMismatchError : std::runtime_error {
    explicit JetMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct SigmaNotZeroError : std::runtime_error {
    explicit SigmaNotZeroError(const std::string& what) : std::runtime_error(what) {}
};

struct NotParallelError : std::runtime_error {
    explicit NotParallelError(const std::string& what) : std::runtime_error(what) {}
};

struct NotOrthogonalError : std::runtime_error {
    explicit NotOrthogonalError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isotm
