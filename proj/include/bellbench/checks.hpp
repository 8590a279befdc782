#pragma once

#include <stdexcept>
#include <string>

namespace bellbench {

// Internal consistency assertion. A failure signals a bug in this library
// (or a violated physical bound), never bad user input; the CLI maps
// std::logic_error to exit code 2.
inline void internal_check(bool ok, const char* what) {
    if (!ok) {
        throw std::logic_error(std::string("internal check failed: ") + what);
    }
}

}  // namespace bellbench
