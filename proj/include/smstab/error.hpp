#pragma once

#include <stdexcept>
#include <string>

namespace smstab {

// thrown when an iterative kernel fails to converge or a computation degenerates
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// thrown when independently computed results contradict each other
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace smstab
