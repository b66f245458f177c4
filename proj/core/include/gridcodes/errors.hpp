#ifndef GRIDCODES_ERRORS_HPP
#define GRIDCODES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridcodes {

// A computation would exceed a configured memory or search cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A finite matrix entry would exceed the representable range.
struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// The power store on disk is missing or inconsistent.
struct StoreError : std::runtime_error {
    explicit StoreError(const std::string& what) : std::runtime_error(what) {}
};

// Pseudo-period detection exhausted the exponent cap without success.
struct StabilityCapError : std::runtime_error {
    StabilityCapError(const std::string& what, int cap_value)
        : std::runtime_error(what), cap(cap_value) {}
    int cap;
};

}  // namespace gridcodes

#endif
