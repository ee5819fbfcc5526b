#include "dsf/format.hpp"

#include <array>
#include <charconv>

namespace dsf {

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 16);
    return std::string(buf.data(), res.ptr);
}

}  // namespace dsf
