#pragma once

#include <stdexcept>
#include <string>

namespace agentclass {

// All recoverable failures carry a stable machine-readable name ("MissingColumn",
// "SingleClassTraining", ...). The CLI prints the name and exits 2; step/limit
// errors derive from StepLimitExceeded (see runtime.hpp) and exit 3.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

}  // namespace agentclass
