#include "l2approx/parallel.hpp"

#include <cstdlib>
#include <string>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {
std::atomic<std::size_t> override_count{0};
}

std::size_t thread_count() {
  if (const std::size_t o = override_count.load()) return o;
  if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(env, &pos);
      if (pos == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
    throw InvalidArgument(std::string(kThreadsEnv) + " must be a positive integer, got '" + env + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void set_thread_count(std::size_t n) { override_count = n; }

}  // namespace l2approx
