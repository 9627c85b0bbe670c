#pragma once

// Plain-text model files.
//
//   [model]
//   format = fmdp-model-1
//   horizon = 5
//   reward_known = true
//   state_sizes = 3 3
//   action_sizes = 4
//
//   [transition.0]
//   scope = 0 2
//   rows = <cells * S_0 probabilities, row after row>
//
//   [reward.0]
//   scope = 0 1 2
//   kind = bernoulli
//   means = <one mean per scope cell>
//
// Numbers are written with 17 significant digits so that a write/read cycle
// reproduces every double exactly.

#include <filesystem>
#include <string>
#include <string_view>

#include "fmdp/factored_model.hpp"

namespace fmdp {

std::string model_to_text(const FactoredModel& model);
FactoredModel model_from_text(std::string_view text);

void save_model(const FactoredModel& model, const std::filesystem::path& path);
FactoredModel load_model(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace fmdp
