#pragma once

#include <stdexcept>
#include <string>

namespace fcp {

// Validation failures map to CLI exit code 2, everything else to 1.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct empty_input : validation_error {
    explicit empty_input(const std::string& what) : validation_error(what) {}
};

struct dimension_mismatch : validation_error {
    explicit dimension_mismatch(const std::string& what) : validation_error(what) {}
};

struct negative_value : validation_error {
    explicit negative_value(const std::string& what) : validation_error(what) {}
};

struct index_out_of_range : std::runtime_error {
    explicit index_out_of_range(const std::string& what) : std::runtime_error(what) {}
};

struct segment_too_short : std::runtime_error {
    explicit segment_too_short(const std::string& what) : std::runtime_error(what) {}
};

struct no_active_evaluation_points : std::runtime_error {
    explicit no_active_evaluation_points(const std::string& what) : std::runtime_error(what) {}
};

struct insufficient_data : std::runtime_error {
    explicit insufficient_data(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fcp
