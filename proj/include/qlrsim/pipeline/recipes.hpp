#pragma once

#include <string>
#include <vector>

#include "qlrsim/pipeline/config.hpp"

namespace qlrsim::pipeline {

struct Recipe {
  std::string name;
  std::string description;
  std::string toml;
};

/// Built-in run configs, one per reproduced table or figure.
const std::vector<Recipe>& recipes();
/// Throws ConfigError for unknown names.
const Recipe& find_recipe(const std::string& name);
bool is_recipe(const std::string& name);
RunConfig recipe_config(const std::string& name);

}  // namespace qlrsim::pipeline
