#include "swarmsim/log.hpp"

#include <cstdlib>
#include <cstring>

namespace swarmsim {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("SWARMSIM_LOG");
    if (env == nullptr || *env == '\0') return 0;
    if (std::strcmp(env, "quiet") == 0) return 0;
    if (std::strcmp(env, "info") == 0) return 1;
    if (std::strcmp(env, "debug") == 0) return 2;
    return std::atoi(env);
  }();
  return level;
}

}  // namespace swarmsim
