// Copyright 2026 The SEMDR Authors.
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

#include <filesystem>
#include <string>

#include "json.hpp"
#include "semdr/trainer.hpp"

namespace semdr {

// Single JSON document with top-level fields in the order meta, encoder,
// graph, optimizer. Numbers are written in shortest round-trip form, so a
// save / load cycle reproduces every parameter bit for bit.
nlohmann::ordered_json checkpoint_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);

std::string serialize_checkpoint(const Model& model);
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace semdr
