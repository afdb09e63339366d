#pragma once

#include <stdexcept>

namespace neuropt {

/// A state left the finite reals. Raised by integrators and the spiking core.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace neuropt
