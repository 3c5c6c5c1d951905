#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pencil {

/// Base of every error the kernel raises. Catch this to handle all of them.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Expression errors -----------------------------------------------------------

class SyntaxError : public Error
{
public:
    SyntaxError(std::size_t offset, const std::string& message)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + message)
        , offset_(offset)
    {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownVariable : public Error
{
public:
    explicit UnknownVariable(const std::string& name)
        : Error("unknown variable '" + name + "'")
    {}
};

class UnknownFunction : public Error
{
public:
    explicit UnknownFunction(const std::string& name)
        : Error("unknown function '" + name + "'")
    {}
};

/// Raised for sqrt of a negative, division by zero, ln of non-positive and
/// for derivatives that do not exist (abs and sqrt at 0).
class DomainError : public Error
{
public:
    using Error::Error;
};

// Geometry errors -------------------------------------------------------------

/// Speed ‖r′‖ fell below the regularity threshold.
class Irregular : public Error
{
public:
    using Error::Error;
};

/// ‖r′ × r″‖ vanishes, so the Frenet frame is undefined.
class InflectionPoint : public Error
{
public:
    using Error::Error;
};

class DegenerateNormal : public Error
{
public:
    using Error::Error;
};

class NotEnoughSamples : public Error
{
public:
    using Error::Error;
};

/// The requested D-type constant violates c²(κ²+τ²) ≤ κ².
class InfeasibleConstant : public Error
{
public:
    using Error::Error;
};

/// Scene configuration is malformed or incomplete.
class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace pencil
