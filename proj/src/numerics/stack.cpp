#include "bean/stack.hpp"

#include <pthread.h>

#include <exception>
#include <stdexcept>

namespace bean {

namespace {

struct Job {
  const std::function<int()>* fn;
  int result = 0;
  std::exception_ptr error;
};

void* trampoline(void* arg) {
  auto* job = static_cast<Job*>(arg);
  try {
    job->result = (*job->fn)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

int run_with_large_stack(const std::function<int()>& fn, std::size_t bytes) {
  Job job{&fn, 0, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, trampoline, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) return fn();  // fall back to the current stack
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
  return job.result;
}

}  // namespace bean
