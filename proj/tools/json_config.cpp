#include "json_config.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace qakd::cli {
namespace {

using nlohmann::json;

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void flatten(const json& obj, std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      parents.push_back(key);
      flatten(value, parents, out);
      parents.pop_back();
      continue;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array()) {
      for (const json& v : value) item.inputs.push_back(scalar_text(v));
    } else {
      item.inputs.push_back(scalar_text(value));
    }
    out.push_back(std::move(item));
  }
}

json option_values(const CLI::App* app, bool default_also) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() > 1) {
        out[name] = results;
      } else if (opt->get_type_size() == 0) {
        out[name] = true;
      } else {
        out[name] = results.empty() ? "" : results.back();
      }
    } else if (default_also) {
      if (opt->get_type_size() == 0) {
        out[name] = false;
      } else {
        out[name] = opt->get_default_str();
      }
    }
  }
  return out;
}

}  // namespace

std::string ConfigJSON::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  json out = option_values(app, default_also);
  for (const CLI::App* sub : app->get_subcommands({})) {
    if (sub->count() == 0 && !default_also) continue;
    if (sub->count() == 0) continue;
    out[sub->get_name()] = option_values(sub, default_also);
  }
  return out.dump();
}

std::vector<CLI::ConfigItem> ConfigJSON::from_config(std::istream& input) const {
  std::stringstream buf;
  buf << input.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw CLI::ConversionError("config", std::string("malformed JSON config: ") + e.what());
  }
  if (!doc.is_object()) throw CLI::ConversionError("config", "JSON config must be an object");
  std::vector<CLI::ConfigItem> items;
  std::vector<std::string> parents;
  flatten(doc, parents, items);
  return items;
}

}  // namespace qakd::cli
