#ifndef QAKD_TOOLS_JSON_CONFIG_HPP
#define QAKD_TOOLS_JSON_CONFIG_HPP

#include <CLI11.hpp>

namespace qakd::cli {

/// CLI11 config reader for JSON files. Top-level keys are global option names;
/// an object value named after a subcommand holds that subcommand's options:
///   {"seed": 7, "select": {"strategy": "lc", "budget": 100}}
class ConfigJSON : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace qakd::cli

#endif  // QAKD_TOOLS_JSON_CONFIG_HPP
