#pragma once

#include <mutex>

namespace ancient::detail {

// FFTW planning and plan destruction are not thread safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace ancient::detail
