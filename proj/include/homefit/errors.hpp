#ifndef HOMEFIT_ERRORS_HPP
#define HOMEFIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homefit {

// numerical breakdown tied to a specific pivot row/column
class SingularError : public std::runtime_error {
public:
    SingularError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// malformed or incomplete tabular input (bad header, bad cell, bad value)
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// file could not be opened, read, or written
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace homefit

#endif
