#include "apps/apps.hpp"

#include <stdexcept>

namespace tsg {

std::string opt_str(const AppOptions& o, const std::string& key, const std::string& fallback) {
  auto it = o.find(key);
  return it == o.end() ? fallback : it->second;
}

std::uint64_t opt_u64(const AppOptions& o, const std::string& key, std::uint64_t fallback) {
  auto it = o.find(key);
  if (it == o.end()) return fallback;
  try {
    std::size_t used = 0;
    auto v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw TsgError("invalid value for option " + key + ": " + it->second);
  }
}

double opt_f64(const AppOptions& o, const std::string& key, double fallback) {
  auto it = o.find(key);
  if (it == o.end()) return fallback;
  try {
    std::size_t used = 0;
    auto v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw TsgError("invalid value for option " + key + ": " + it->second);
  }
}

std::string require_str(const AppOptions& o, const std::string& key) {
  auto it = o.find(key);
  if (it == o.end() || it->second.empty()) throw TsgError("missing required option: " + key);
  return it->second;
}

std::uint64_t require_u64(const AppOptions& o, const std::string& key) {
  if (o.find(key) == o.end()) throw TsgError("missing required option: " + key);
  return opt_u64(o, key, 0);
}

std::optional<double> mean_weight(const ValueList& vals) {
  if (vals.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& v : vals) {
    if (std::holds_alternative<double>(v))
      sum += std::get<double>(v);
    else if (std::holds_alternative<std::int64_t>(v))
      sum += static_cast<double>(std::get<std::int64_t>(v));
    else
      return std::nullopt;
  }
  return sum / static_cast<double>(vals.size());
}

std::unique_ptr<App> make_app(const std::string& name, const AppOptions& opts) {
  if (name == "sssp") return make_sssp(opts);
  if (name == "pagerank") return make_pagerank(opts);
  if (name == "nhop") return make_nhop(opts);
  if (name == "track") return make_track(opts);
  throw TsgError("unknown app: " + name);
}

std::vector<std::string> app_names() { return {"nhop", "pagerank", "sssp", "track"}; }

}  // namespace tsg
