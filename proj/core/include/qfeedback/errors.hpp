#pragma once

#include <stdexcept>

namespace qfeedback {

/// Invalid scenario configuration or command-line input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace qfeedback
