#include "greenlab/core.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace greenlab {

namespace {
std::atomic<bool> warnings_enabled{false};
std::mutex warn_mutex;
}  // namespace

void set_warnings_enabled(bool enabled) { warnings_enabled = enabled; }

void warn(const std::string& message) {
  if (!warnings_enabled) return;
  std::lock_guard<std::mutex> lock(warn_mutex);
  std::cerr << "greenlab: warning: " << message << '\n';
}

}  // namespace greenlab
