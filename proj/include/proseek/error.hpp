#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proseek {

// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Timestamps or events arrived out of order.
class SequencingError : public Error {
public:
    using Error::Error;
};

// A caller broke an operation's precondition (bad dimension, non-positive speed, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// An LLM or embedder backend failed or timed out.
class AdapterError : public Error {
public:
    using Error::Error;
};

// Invalid configuration; the message names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Malformed input file. line() is 1-based, 0 when not line oriented.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace proseek
