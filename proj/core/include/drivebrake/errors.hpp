#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drivebrake {

// Base for failures of a numerical scheme (as opposed to bad input).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalAbort : public NumericalError {
public:
    NumericalAbort(const std::string& what, std::size_t node, double time)
        : NumericalError(what + " at node " + std::to_string(node) + ", t=" + std::to_string(time)),
          node_(node),
          time_(time)
    {
    }
    std::size_t node() const { return node_; }
    double time() const { return time_; }

private:
    std::size_t node_;
    double time_;
};

}  // namespace drivebrake
