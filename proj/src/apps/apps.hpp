#pragma once
// Reference analytics registry. Every app is configured through a flat
// string-to-string option map so the CLI and the shared library can drive it
// the same way.

#include <map>
#include <memory>

#include "engine/engine.hpp"

namespace tsg {

using AppOptions = std::map<std::string, std::string>;

std::unique_ptr<App> make_sssp(const AppOptions& opts);
std::unique_ptr<App> make_pagerank(const AppOptions& opts);
std::unique_ptr<App> make_nhop(const AppOptions& opts);
std::unique_ptr<App> make_track(const AppOptions& opts);

std::unique_ptr<App> make_app(const std::string& name, const AppOptions& opts);
std::vector<std::string> app_names();

// Option access with parse errors surfaced as TsgError.
std::string opt_str(const AppOptions& o, const std::string& key, const std::string& fallback);
std::uint64_t opt_u64(const AppOptions& o, const std::string& key, std::uint64_t fallback);
double opt_f64(const AppOptions& o, const std::string& key, double fallback);
std::string require_str(const AppOptions& o, const std::string& key);
std::uint64_t require_u64(const AppOptions& o, const std::string& key);

// Mean of a list of numeric values; empty or non-numeric lists yield nothing,
// which callers treat as an unusable edge.
std::optional<double> mean_weight(const ValueList& vals);

}  // namespace tsg
