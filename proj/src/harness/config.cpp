#include "rcm/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rcm::harness {

namespace {

constexpr std::string_view kExperimentNames[] = {
    "exact-check", "duality-check",     "selfdual-crossing", "threshold",   "decay",
    "menger-check", "influence-profile", "inequality-suite", "estimate-pc",
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T number(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(key + ": '" + text + "' is not a valid number");
  return v;
}

std::vector<double> real_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) {
    if (item.find(':') != std::string::npos) {
      const auto parts = split(item, ':');
      if (parts.size() != 3) throw ConfigError(key + ": ranges are written lo:hi:step");
      const double lo = number<double>(key, parts[0]), hi = number<double>(key, parts[1]);
      const double step = number<double>(key, parts[2]);
      if (!(step > 0.0) || hi < lo) throw ConfigError(key + ": range needs lo <= hi and step > 0");
      const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
      for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    } else {
      out.push_back(number<double>(key, item));
    }
  }
  return out;
}

std::vector<int> int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split(value, ',')) out.push_back(number<int>(key, item));
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) { return kExperimentNames[static_cast<int>(kind)]; }

ExperimentKind parse_experiment(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kExperimentNames); ++i)
    if (kExperimentNames[i] == name) return static_cast<ExperimentKind>(i);
  throw ConfigError("experiment: unknown kind '" + std::string(name) + "'");
}

Region ExperimentConfig::geometry() const {
  if (region) {
    if (a || b) throw ConfigError("geometry: give either region or a and b, not both");
    return *region;
  }
  if (!a || !b) throw ConfigError("geometry: a and b (or region) are required");
  if (*a < 0 || *b < 0) throw ConfigError("geometry: a and b must be >= 0");
  return build_region(*a, *b);
}

Schedule ExperimentConfig::schedule_for(const Region& r) const {
  Schedule s = default_schedule(r, sampler);
  if (burn_in) s.burn_in = *burn_in;
  if (thin) s.thin = *thin;
  if (batches) s.batches = *batches;
  if (sweeps) s.sweeps = *sweeps;
  else s.sweeps = s.burn_in + s.thin * 20 * 50;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sweeps/burnin/thin: ") + e.what());
  }
  return s;
}

void ExperimentConfig::validate() const {
  if (!seed) throw ConfigError("seed: required (no silent nondeterminism)");
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("p: " + std::to_string(v) + " is outside [0,1]");
  for (double v : q)
    if (!(v >= 1.0)) throw ConfigError("q: " + std::to_string(v) + " is below 1");
  for (int v : n)
    if (v < 1) throw ConfigError("n: values must be >= 1");
  if (!(margin >= 1.0)) throw ConfigError("margin: must be >= 1");
  if (!(delta >= 0.0)) throw ConfigError("delta: must be >= 0");
  if (!(c > 0.0)) throw ConfigError("c: must be > 0");
  if (mode != "mc" && mode != "exact") throw ConfigError("mode: must be 'mc' or 'exact'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"experiment", [&](auto&, auto& v) { cfg.experiment = parse_experiment(v); }},
      {"p", [&](auto& k, auto& v) { cfg.p = real_list(k, v); }},
      {"q", [&](auto& k, auto& v) { cfg.q = real_list(k, v); }},
      {"bc",
       [&](auto& k, auto& v) {
         cfg.bc.clear();
         for (const auto& item : split(v, ',')) {
           try {
             cfg.bc.push_back(parse_boundary(item));
           } catch (const std::invalid_argument&) {
             throw ConfigError(k + ": '" + item + "' is not free or wired");
           }
         }
       }},
      {"n", [&](auto& k, auto& v) { cfg.n = int_list(k, v); }},
      {"a", [&](auto& k, auto& v) { cfg.a = number<int>(k, v); }},
      {"b", [&](auto& k, auto& v) { cfg.b = number<int>(k, v); }},
      {"region",
       [&](auto& k, auto& v) {
         const auto xs = int_list(k, v);
         if (xs.size() != 4) throw ConfigError(k + ": expected x_min, x_max, y_min, y_max");
         if (xs[0] > xs[1] || xs[2] > xs[3]) throw ConfigError(k + ": empty rectangle");
         cfg.region = Region(xs[0], xs[1], xs[2], xs[3]);
       }},
      {"margin", [&](auto& k, auto& v) { cfg.margin = number<double>(k, v); }},
      {"sweeps", [&](auto& k, auto& v) { cfg.sweeps = number<std::int64_t>(k, v); }},
      {"burnin", [&](auto& k, auto& v) { cfg.burn_in = number<std::int64_t>(k, v); }},
      {"thin", [&](auto& k, auto& v) { cfg.thin = number<std::int64_t>(k, v); }},
      {"batches", [&](auto& k, auto& v) { cfg.batches = number<int>(k, v); }},
      {"sampler",
       [&](auto& k, auto& v) {
         try {
           cfg.sampler = parse_sampler(v);
         } catch (const std::invalid_argument&) {
           throw ConfigError(k + ": '" + v + "' is not heat-bath or chayes-machta");
         }
       }},
      {"seed", [&](auto& k, auto& v) { cfg.seed = number<std::uint64_t>(k, v); }},
      {"output", [&](auto&, auto& v) { cfg.output = v; }},
      {"distances", [&](auto& k, auto& v) { cfg.distances = int_list(k, v); }},
      {"event", [&](auto&, auto& v) { cfg.event = v; }},
      {"tolerance", [&](auto& k, auto& v) { cfg.tolerance = number<double>(k, v); }},
      {"delta", [&](auto& k, auto& v) { cfg.delta = number<double>(k, v); }},
      {"c", [&](auto& k, auto& v) { cfg.c = number<double>(k, v); }},
      {"k_min", [&](auto& k, auto& v) { cfg.k_min = number<int>(k, v); }},
      {"k_max", [&](auto& k, auto& v) { cfg.k_max = number<int>(k, v); }},
      {"mode", [&](auto&, auto& v) { cfg.mode = v; }},
  };

  std::string line;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (seen.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": '" + key + "' already set on line " +
                        std::to_string(seen[key]));
    seen[key] = line_no;
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": '" + key + "' has no value");
    it->second(key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace rcm::harness
