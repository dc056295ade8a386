#pragma once

#include <string>
#include <string_view>

namespace credal_cert::cli {

// "sha256:<64 lowercase hex digits>"
std::string sha256_digest(std::string_view bytes);

}  // namespace credal_cert::cli
