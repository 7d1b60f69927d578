#include "tripletkit/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace tripletkit {

std::size_t worker_count() {
  if (const char* env = std::getenv("TRIPLETKIT_THREADS")) {
    std::string_view s(env);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && value > 0) return value;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace tripletkit
