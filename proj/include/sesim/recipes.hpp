// Copyright 2026 The sesim Authors
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

// Named recipes that regenerate the datasets behind each published figure.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sesim {

struct RecipeOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  /// Overrides the per-recipe default trial count.
  std::optional<std::int64_t> trials;
  /// Potential table for fig9..12.
  std::optional<std::string> table;
  /// Smaller grids for smoke runs.
  bool quick = false;
};

/// fig2, fig3, fig4, fig7, fig8, fig9..12, fig13, fig14, fig15.
const std::vector<std::string>& recipe_names();

/// Writes the recipe's CSV files under out_dir and returns their paths.
std::vector<std::string> run_recipe(const std::string& name, const RecipeOptions& opts);

}  // namespace sesim
