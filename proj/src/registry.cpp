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

#include "voxelkit/registry.hpp"

#include <iostream>

#include "register_ops.hpp"

namespace voxelkit {

void ExecutionRegistry::freeze() {
  for (const auto& [name, entry] : table_) {
    if (!entry.kernels[static_cast<int>(BackendId::reference)].has_value())
      throw Error("operation '" + name + "' has no reference implementation");
  }
  frozen_ = true;
}

std::vector<std::string> ExecutionRegistry::operation_names() const {
  std::vector<std::string> names;
  names.reserve(table_.size());
  for (const auto& [name, entry] : table_) names.push_back(name);
  return names;
}

bool ExecutionRegistry::has_kernel(std::string_view name,
                                   BackendId backend) const {
  auto it = table_.find(name);
  return it != table_.end() &&
         it->second.kernels[static_cast<int>(backend)].has_value();
}

ExecutionRegistry::WarningHandler ExecutionRegistry::set_warning_handler(
    WarningHandler handler) {
  std::swap(handler, warning_handler_);
  return handler;
}

const std::any& ExecutionRegistry::lookup(std::string_view name,
                                          BackendId backend) const {
  auto it = table_.find(name);
  if (it == table_.end())
    throw UnknownOperation("operation '" + std::string(name) +
                           "' is not registered");
  const std::any& wanted = it->second.kernels[static_cast<int>(backend)];
  if (wanted.has_value()) return wanted;
  if (backend == BackendId::accelerated && fallback_) {
    warn_fallback(name);
    return it->second.kernels[static_cast<int>(BackendId::reference)];
  }
  throw UnknownOperation("operation '" + std::string(name) +
                         "' has no kernel for backend " + to_string(backend));
}

void ExecutionRegistry::warn_fallback(std::string_view name) const {
  {
    std::lock_guard<std::mutex> lock(warned_mutex_);
    if (!warned_.insert(std::string(name)).second) return;
  }
  const std::string msg =
      "no accelerated kernel for '" + std::string(name) +
      "'; falling back to the reference implementation";
  if (warning_handler_) {
    warning_handler_(msg);
  } else {
    std::cerr << "[voxelkit] warning: " << msg << "\n";
  }
}

ExecutionRegistry& registry() {
  static ExecutionRegistry* instance = [] {
    auto* reg = new ExecutionRegistry();
    detail::register_core_ops(*reg);
    detail::register_filter_ops(*reg);
    detail::register_transform_ops(*reg);
    detail::register_threshold_ops(*reg);
    detail::register_morphology_ops(*reg);
    detail::register_segmentation_ops(*reg);
    detail::register_deconv_ops(*reg);
    reg->freeze();
    return reg;
  }();
  return *instance;
}

}  // namespace voxelkit
