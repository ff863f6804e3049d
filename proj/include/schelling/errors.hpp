#pragma once

#include <stdexcept>
#include <string>

namespace schelling {

// Thrown when an input would exceed a configured size/memory cap. This is a
// resource rejection, not a logic error; the CLI maps it to exit code 3.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace schelling
