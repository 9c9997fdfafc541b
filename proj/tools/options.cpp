#include "options.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "fermigas/fit.hpp"

namespace fermigas::cli {

namespace {

std::string rebased(const std::string& path, const std::filesystem::path& base) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (base / p).lexically_normal().string();
}

}  // namespace

CLI::Option* OptionSet::add_path(const std::string& name, std::string& field, const std::string& help) {
  CLI::Option* opt = app_->add_option("--" + name, field, help);
  entries_.push_back({name, opt, true, [&field](const nlohmann::json& j) { field = j.get<std::string>(); },
                      [&field] { return nlohmann::json(field); },
                      [&field](const std::filesystem::path& base) { field = rebased(field, base); }});
  return opt;
}

CLI::Option* OptionSet::add_paths(const std::string& name, std::vector<std::string>& field, const std::string& help) {
  CLI::Option* opt = app_->add_option("--" + name, field, help);
  entries_.push_back({name, opt, true,
                      [&field](const nlohmann::json& j) { field = j.get<std::vector<std::string>>(); },
                      [&field] { return nlohmann::json(field); },
                      [&field](const std::filesystem::path& base) {
                        for (auto& f : field) f = rebased(f, base);
                      }});
  return opt;
}

CLI::Option* OptionSet::add_flag(const std::string& name, bool& field, const std::string& help) {
  CLI::Option* opt = app_->add_flag("--" + name, field, help);
  entries_.push_back({name, opt, false, [&field](const nlohmann::json& j) { field = j.get<bool>(); },
                      [&field] { return nlohmann::json(field); }, nullptr});
  return opt;
}

void OptionSet::apply(const nlohmann::json& options, const std::filesystem::path& base_dir) {
  if (!options.is_object()) throw std::invalid_argument("config field 'options' must be an object");
  for (const auto& [key, value] : options.items()) {
    Entry* entry = nullptr;
    for (auto& e : entries_)
      if (e.name == key) entry = &e;
    if (entry == nullptr)
      throw std::invalid_argument("config field 'options." + key + "' is not an option of '" + app_->get_name() + "'");
    if (entry->option->count() > 0) continue;
    try {
      entry->assign(value);
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("config field 'options." + key + "' has the wrong type");
    }
    if (entry->rebase) entry->rebase(base_dir);
  }
}

nlohmann::json OptionSet::echo() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& e : entries_) out[e.name] = e.value();
  return out;
}

std::vector<double> parse_log_range(const std::string& text, const std::string& field) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument(field + ": expected lo:hi:n, got '" + text + "'");
  double lo = 0.0, hi = 0.0;
  long n = 0;
  auto parse = [&](auto& out, std::size_t from, std::size_t to) {
    const char* first = text.data() + from;
    const char* last = text.data() + to;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || first == last)
      throw std::invalid_argument(field + ": expected lo:hi:n, got '" + text + "'");
  };
  parse(lo, 0, c1);
  parse(hi, c1 + 1, c2);
  parse(n, c2 + 1, text.size());
  if (n <= 0) throw std::invalid_argument(field + ": the sweep is empty");
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw std::invalid_argument(field + ": need 0 < lo <= hi");
  if (n == 1) return {lo};
  if (hi == lo) throw std::invalid_argument(field + ": lo equals hi with more than one point");
  return log_space(lo, hi, static_cast<int>(n));
}

}  // namespace fermigas::cli
