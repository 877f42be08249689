#include "gmy/common.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gmy {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::CriticalPoint: return "critical-point error";
    case ErrorKind::NoPreimage: return "no-preimage error";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::NotFound: return "not-found error";
    case ErrorKind::DeltaTooLarge: return "delta1-too-large error";
    case ErrorKind::HyperbolicityViolation: return "hyperbolicity-violation error";
    case ErrorKind::SearchFailure: return "search-failure error";
    case ErrorKind::Coverage: return "coverage error";
    case ErrorKind::Mode: return "mode error";
    case ErrorKind::EmptySet: return "empty-set error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::Calibration: return "calibration error";
    case ErrorKind::EmptyPartition: return "empty-partition error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "io error";
  }
  return "error";
}

namespace {
std::atomic<unsigned> g_workers{0};
}

unsigned default_workers() {
  unsigned w = g_workers.load();
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return w;
}

void set_default_workers(unsigned workers) { g_workers.store(workers); }

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          cursor.store(count);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gmy
