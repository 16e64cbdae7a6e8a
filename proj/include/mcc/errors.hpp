#pragma once

#include <stdexcept>
#include <string>

namespace mcc {

struct IncompatibleGrids : std::runtime_error {
    explicit IncompatibleGrids(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct SpecMismatch : std::runtime_error {
    explicit SpecMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleEnvelope : std::runtime_error {
    explicit InfeasibleEnvelope(const std::string& what) : std::runtime_error(what) {}
};

struct CoercivityLost : std::runtime_error {
    explicit CoercivityLost(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NonpositiveLower : std::runtime_error {
    explicit NonpositiveLower(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mcc
