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

// Internal: per-module kernel registration, called once from registry().
// Explicit calls (instead of static registrar objects) keep behavior
// independent of which translation units the linker decides to keep.

namespace voxelkit {
class ExecutionRegistry;
namespace detail {

void register_core_ops(ExecutionRegistry& reg);
void register_filter_ops(ExecutionRegistry& reg);
void register_transform_ops(ExecutionRegistry& reg);
void register_threshold_ops(ExecutionRegistry& reg);
void register_morphology_ops(ExecutionRegistry& reg);
void register_segmentation_ops(ExecutionRegistry& reg);
void register_deconv_ops(ExecutionRegistry& reg);

}  // namespace detail

// Sub-registrars of the segmentation module's translation units.
namespace seg::detail {

void register_distance_op(ExecutionRegistry& reg);
void register_labeling_ops(ExecutionRegistry& reg);
void register_watershed_op(ExecutionRegistry& reg);

}  // namespace seg::detail
}  // namespace voxelkit
