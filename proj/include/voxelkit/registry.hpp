/**
 * @license
 * Copyright 2026 VoxelKit Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <any>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "voxelkit/image.hpp"

namespace voxelkit {

namespace detail {

// Backend detection over a dispatch argument pack: the first NdImage picks
// the backend, every further NdImage must agree.
inline void collect_backend(std::optional<BackendId>& picked, const NdImage& img) {
  if (img.empty()) return;  // optional-image sentinel
  if (!picked) {
    picked = img.backend();
  } else if (*picked != img.backend()) {
    throw MixedBackends("image arguments are on different backends");
  }
}
template <class T>
void collect_backend(std::optional<BackendId>&, const T&) {}

template <class... Args>
BackendId detect_backend(const Args&... args) {
  std::optional<BackendId> picked;
  (collect_backend(picked, args), ...);
  return picked.value_or(BackendId::reference);
}

}  // namespace detail

// Maps (operation name, backend) to an implementation. Filled once at
// startup, frozen, then read-only; lookups are safe from any thread.
class ExecutionRegistry {
 public:
  using WarningHandler = std::function<void(const std::string&)>;

  template <typename Sig>
  void add(std::string name, BackendId backend, std::function<Sig> fn) {
    if (frozen_) throw Error("registry is frozen");
    table_[std::move(name)].kernels[static_cast<int>(backend)] =
        std::move(fn);
  }

  // Verifies every operation has a reference kernel, then locks the table.
  void freeze();
  bool frozen() const { return frozen_; }

  std::vector<std::string> operation_names() const;
  bool has_kernel(std::string_view name, BackendId backend) const;

  void set_fallback(bool enabled) { fallback_ = enabled; }
  bool fallback_enabled() const { return fallback_; }

  // Replaces the fallback-warning sink (default: stderr). Returns the
  // previous handler. Intended for tests and embedding applications.
  WarningHandler set_warning_handler(WarningHandler handler);

  // Runs (name, backend-of-first-image-argument). When the accelerated
  // kernel is missing and fallback is enabled, runs the reference kernel
  // and emits a one-time warning; an NdImage result is always re-tagged
  // with the input backend.
  template <typename Sig, typename... Args>
  auto run(std::string_view name, Args&&... args) const {
    const BackendId backend = detail::detect_backend(args...);
    const std::any& kernel = lookup(name, backend);
    const auto& fn = std::any_cast<const std::function<Sig>&>(kernel);
    using Result = decltype(fn(std::forward<Args>(args)...));
    if constexpr (std::is_same_v<std::decay_t<Result>, NdImage>) {
      return fn(std::forward<Args>(args)...).with_backend(backend);
    } else {
      return fn(std::forward<Args>(args)...);
    }
  }

 private:
  struct Entry {
    std::any kernels[2];
  };

  // Picks the kernel for (name, backend), applying the fallback policy.
  const std::any& lookup(std::string_view name, BackendId backend) const;
  void warn_fallback(std::string_view name) const;

  std::map<std::string, Entry, std::less<>> table_;
  bool frozen_ = false;
  bool fallback_ = true;
  WarningHandler warning_handler_;
  mutable std::mutex warned_mutex_;
  mutable std::set<std::string, std::less<>> warned_;
};

// The process-wide registry, built and frozen on first use.
ExecutionRegistry& registry();

// Dispatches op `name` with the executing backend taken from the first
// NdImage argument.
template <typename Sig, typename... Args>
auto dispatch(std::string_view name, Args&&... args) {
  return registry().run<Sig>(name, std::forward<Args>(args)...);
}

}  // namespace voxelkit
