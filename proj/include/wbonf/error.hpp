#pragma once

#include <stdexcept>
#include <string>

namespace wbonf {

// Status codes shared with the C API surface (see include/wbonf.h).
enum class Status : int {
    ok = 0,
    null_pointer = 1,
    invalid_argument = 2,
    domain_error = 3,
    group_too_small = 4,
    no_signal = 5,
    solver_failure = 6,
    length_mismatch = 7,
    parse_error = 8,
    io_error = 9,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}

    Status status() const noexcept { return status_; }

private:
    Status status_;
};

[[noreturn]] inline void raise(Status status, const std::string& message) {
    throw Error(status, message);
}

}  // namespace wbonf
