#include "fmdp/model_io.hpp"

#include <fstream>
#include <sstream>

#include "fmdp/errors.hpp"
#include "fmdp/structured_text.hpp"

namespace fmdp {

namespace {

constexpr std::string_view kFormat = "fmdp-model-1";

std::string join_sizes(std::span<const std::size_t> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(values[i]);
  }
  return out;
}

const std::string& require(const TextSection& section, std::string_view key) {
  const auto* entry = section.find(key);
  if (entry == nullptr) {
    throw StructuralError("[" + section.name + "] is missing '" + std::string(key) + "'");
  }
  return entry->value;
}

std::vector<std::size_t> to_sizes(const std::vector<std::uint64_t>& values) {
  return {values.begin(), values.end()};
}

bool parse_bool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw StructuralError("expected true or false, got '" + text + "'");
}

}  // namespace

std::string model_to_text(const FactoredModel& model) {
  std::ostringstream out;
  out << "[model]\n";
  out << "format = " << kFormat << "\n";
  out << "horizon = " << model.horizon() << "\n";
  out << "reward_known = " << (model.reward_known() ? "true" : "false") << "\n";
  out << "state_sizes = " << join_sizes(model.state_space().sizes()) << "\n";
  out << "action_sizes = " << join_sizes(model.action_space().sizes()) << "\n";
  for (std::size_t i = 0; i < model.num_transition_components(); ++i) {
    const auto& t = model.transition(i);
    out << "\n[transition." << i << "]\n";
    out << "scope = " << join_sizes(t.scope.indices()) << "\n";
    out << "rows = " << join_doubles(t.rows) << "\n";
  }
  for (std::size_t j = 0; j < model.num_reward_components(); ++j) {
    const auto& r = model.reward(j);
    out << "\n[reward." << j << "]\n";
    out << "scope = " << join_sizes(r.scope.indices()) << "\n";
    out << "kind = " << to_string(r.kind) << "\n";
    out << "means = " << join_doubles(r.means) << "\n";
  }
  return out.str();
}

FactoredModel model_from_text(std::string_view text) {
  const auto doc = parse_structured_text(text);
  const auto* header = doc.find("model");
  if (header == nullptr) throw StructuralError("missing [model] section");
  if (require(*header, "format") != kFormat) {
    throw StructuralError("unsupported model format '" + require(*header, "format") + "'");
  }
  const auto horizon = parse_uint(require(*header, "horizon"));
  if (!horizon) throw StructuralError("bad horizon");
  const bool reward_known = parse_bool(require(*header, "reward_known"));
  auto state_sizes = to_sizes(parse_uint_list(require(*header, "state_sizes"), "state_sizes"));
  auto action_sizes = to_sizes(parse_uint_list(require(*header, "action_sizes"), "action_sizes"));

  std::vector<TransitionComponent> transitions;
  for (std::size_t i = 0;; ++i) {
    const auto* section = doc.find("transition." + std::to_string(i));
    if (section == nullptr) break;
    TransitionComponent t;
    t.scope = ScopeIndexSet(to_sizes(parse_uint_list(require(*section, "scope"), "scope")));
    t.rows = parse_double_list(require(*section, "rows"), "rows");
    transitions.push_back(std::move(t));
  }
  std::vector<RewardComponent> rewards;
  for (std::size_t j = 0;; ++j) {
    const auto* section = doc.find("reward." + std::to_string(j));
    if (section == nullptr) break;
    RewardComponent r;
    r.scope = ScopeIndexSet(to_sizes(parse_uint_list(require(*section, "scope"), "scope")));
    r.kind = reward_kind_from_string(require(*section, "kind"));
    r.means = parse_double_list(require(*section, "means"), "means");
    rewards.push_back(std::move(r));
  }
  return FactoredModel(std::move(state_sizes), std::move(action_sizes), std::move(transitions),
                       std::move(rewards), *horizon, reward_known);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void save_model(const FactoredModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_text(model));
}

FactoredModel load_model(const std::filesystem::path& path) {
  return model_from_text(read_text_file(path));
}

}  // namespace fmdp
