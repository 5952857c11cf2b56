// Copyright 2026 The cavityeit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "cavityeit/errors.hpp"

namespace ceit::detail {

inline int resolve_threads(int requested, std::size_t work) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (static_cast<std::size_t>(n) > work) n = static_cast<int>(work);
  return n < 1 ? 1 : n;
}

// Runs body(i) for i in [0, count) on a small pool. Items are claimed in
// index order; failures are kept per item and returned, never thrown.
inline std::vector<std::exception_ptr> parallel_for(std::size_t count, int threads,
                                                    const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  const int n = resolve_threads(threads, count);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
    return errors;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) run(i);
    });
  }
  for (auto& th : pool) th.join();
  return errors;
}

inline std::string describe(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

// Rethrows `error` as the same library exception type with `context`
// prepended to the message.
[[noreturn]] inline void rethrow_with_context(const std::exception_ptr& error,
                                              const std::string& context) {
  try {
    std::rethrow_exception(error);
  } catch (const NonUniqueSteadyState& ex) {
    throw NonUniqueSteadyState(context + ": " + ex.what());
  } catch (const SolverError& ex) {
    throw SolverError(context + ": " + ex.what());
  } catch (const DimensionMismatch& ex) {
    throw DimensionMismatch(context + ": " + ex.what());
  } catch (const InvalidArgument& ex) {
    throw InvalidArgument(context + ": " + ex.what());
  } catch (const NoCentralPeak& ex) {
    throw NoCentralPeak(context + ": " + ex.what());
  } catch (const FitError& ex) {
    throw FitError(context + ": " + ex.what());
  } catch (const OutOfRange& ex) {
    throw OutOfRange(context + ": " + ex.what());
  } catch (const std::exception& ex) {
    throw Error(context + ": " + ex.what());
  }
}

}  // namespace ceit::detail
