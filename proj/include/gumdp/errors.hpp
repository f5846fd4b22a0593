#pragma once

#include <stdexcept>
#include <string>

namespace gumdp {

/// Malformed input: bad documents, invariant violations, out-of-range parameters.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate linear systems, failed renormalization, caps exceeded.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Process exit codes used by the command line tool.
enum class ExitCode : int { success = 0, validation = 1, numerical = 2, io = 3 };

}  // namespace gumdp
