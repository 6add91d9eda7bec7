#pragma once

#include <stdexcept>
#include <string>

namespace tp {

// Parameter or argument outside the mathematical domain of an operation.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent configuration (file contents, grid sizes, ...).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tp
