#pragma once

#include <cstdio>

namespace swarmsim {

// 0 = warnings only (default), 1 = info, 2 = debug; set via SWARMSIM_LOG
// (numeric, or quiet/info/debug)
int log_level();

}  // namespace swarmsim

#define SWARMSIM_LOG(level, ...)                    \
  do {                                              \
    if (::swarmsim::log_level() >= (level)) {       \
      std::fprintf(stderr, "[swarmsim] " __VA_ARGS__); \
      std::fprintf(stderr, "\n");                   \
    }                                               \
  } while (0)
