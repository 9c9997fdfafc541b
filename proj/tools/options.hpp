#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace fermigas::cli {

/// Options of one subcommand, settable from flags or from the "options" object of a config file.
/// Flags given on the command line win over the config.
class OptionSet {
 public:
  explicit OptionSet(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& field, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, field, help)->capture_default_str();
    entries_.push_back({name, opt, false, [&field](const nlohmann::json& j) { field = j.get<T>(); },
                        [&field] { return nlohmann::json(field); }, nullptr});
    return opt;
  }

  /// A file path; relative paths from a config file resolve against the config's directory.
  CLI::Option* add_path(const std::string& name, std::string& field, const std::string& help);
  CLI::Option* add_paths(const std::string& name, std::vector<std::string>& field, const std::string& help);
  CLI::Option* add_flag(const std::string& name, bool& field, const std::string& help);

  /// Throws std::invalid_argument naming the first unknown or mistyped key.
  void apply(const nlohmann::json& options, const std::filesystem::path& base_dir);

  [[nodiscard]] nlohmann::json echo() const;
  [[nodiscard]] CLI::App* app() const { return app_; }

 private:
  struct Entry {
    std::string name;
    CLI::Option* option;
    bool is_path;
    std::function<void(const nlohmann::json&)> assign;
    std::function<nlohmann::json()> value;
    std::function<void(const std::filesystem::path&)> rebase;
  };

  CLI::App* app_;
  std::vector<Entry> entries_;
};

/// "lo:hi:n", log-spaced; throws std::invalid_argument for an empty or malformed range.
std::vector<double> parse_log_range(const std::string& text, const std::string& field);

}  // namespace fermigas::cli
