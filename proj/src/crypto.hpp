#pragma once

#include <string>
#include <string_view>

namespace forgebench::detail {

std::string sha256_hex(std::string_view data);

}  // namespace forgebench::detail
