#pragma once

#include <stdexcept>
#include <string>

namespace baxlab {

enum class errc {
    duplicate_values,
    index_out_of_range,
    pattern_larger_than_host,
    size_too_large,
    bad_increment,
    left_quadrant,
    bad_endpoints,
    not_total_order,
    not_in_image,
    malformed_tree,
    bad_interval,
    resolution_mismatch,
    bad_parameter,
    off_grid_start,
    bad_epsilon,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::duplicate_values: return "DuplicateValues";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::pattern_larger_than_host: return "PatternLargerThanHost";
        case errc::size_too_large: return "SizeTooLarge";
        case errc::bad_increment: return "BadIncrement";
        case errc::left_quadrant: return "LeftQuadrant";
        case errc::bad_endpoints: return "BadEndpoints";
        case errc::not_total_order: return "NotTotalOrder";
        case errc::not_in_image: return "NotInImage";
        case errc::malformed_tree: return "MalformedTree";
        case errc::bad_interval: return "BadInterval";
        case errc::resolution_mismatch: return "ResolutionMismatch";
        case errc::bad_parameter: return "BadParameter";
        case errc::off_grid_start: return "OffGridStart";
        case errc::bad_epsilon: return "BadEpsilon";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

}  // namespace baxlab
