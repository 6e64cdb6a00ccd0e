#pragma once

// CLI11 config reader for JSON files. Objects nest into subcommand sections,
// arrays become multi-value options:
//   {"degrees": false, "simulate": {"alpha0": 1.2, "state": [0, 0, 0.6, 0]}}

#include <istream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace steiner_cli {

class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::ordered_json j = section(app, default_also);
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const nlohmann::json j = nlohmann::json::parse(input, nullptr, true, true);
    if (!j.is_object()) throw CLI::ConfigError("config: top level must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v, const std::string& key) {
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("config: unsupported value for '" + key + "'");
  }

  static void walk(const nlohmann::json& j, const std::vector<std::string>& parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, val] : j.items()) {
      if (val.is_object()) {
        auto p = parents;
        p.push_back(key);
        walk(val, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (val.is_array())
        for (const auto& e : val) item.inputs.push_back(scalar(e, key));
      else
        item.inputs.push_back(scalar(val, key));
      items.push_back(std::move(item));
    }
  }

  static nlohmann::ordered_json section(const CLI::App* app, bool default_also) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& r = opt->results();
        j[name] = r.size() == 1 ? nlohmann::ordered_json(r.front()) : nlohmann::ordered_json(r);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      if (sub->count() > 0) j[sub->get_name()] = section(sub, default_also);
    }
    return j;
  }
};

}  // namespace steiner_cli
