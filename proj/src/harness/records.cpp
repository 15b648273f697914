#include "rcm/harness/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace rcm::harness {

namespace {

constexpr std::size_t kColumns = 20;

std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>)
    return fmt_real(*v);
  else
    return std::to_string(*v);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_real(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <class T>
std::optional<T> parse_int(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double key_real(const std::optional<double>& v) { return v ? *v : -std::numeric_limits<double>::infinity(); }
long long key_int(const std::optional<int>& v) { return v ? *v : std::numeric_limits<long long>::min(); }

}  // namespace

void sort_records(std::vector<ResultRecord>& records) {
  auto key = [](const ResultRecord& r) {
    return std::make_tuple(r.experiment, key_real(r.q), key_int(r.n), key_int(r.a), key_int(r.b), key_real(r.p),
                           r.bc ? static_cast<int>(*r.bc) : -1);
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const ResultRecord& x, const ResultRecord& y) { return key(x) < key(y); });
}

std::string format_row(const ResultRecord& r) {
  std::string out;
  auto cell = [&](const std::string& s) {
    if (!out.empty()) out += ',';
    out += s;
  };
  out = r.experiment;
  cell(r.kind);
  cell(opt(r.p));
  cell(opt(r.q));
  cell(r.bc ? std::string(to_string(*r.bc)) : std::string());
  cell(opt(r.n));
  cell(opt(r.a));
  cell(opt(r.b));
  cell(opt(r.margin));
  cell(opt(r.sweeps));
  cell(opt(r.burn_in));
  cell(opt(r.thin));
  cell(std::to_string(r.seed));
  cell(r.generator);
  cell(r.metric);
  cell(fmt_real(r.value));
  cell(opt(r.stderr_));
  cell(opt(r.n_samples));
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wallclock_s);
  cell(wall);
  cell(r.version);
  return out;
}

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) os << format_row(r) << '\n';
}

std::vector<ResultRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("read_csv: missing or wrong header");
  std::vector<ResultRecord> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split_row(line);
    if (c.size() != kColumns) throw std::runtime_error("read_csv: line " + std::to_string(line_no) + " has the wrong number of cells");
    auto real = [&](const std::string& s) { return s.empty() ? std::nullopt : parse_real(s); };
    ResultRecord r;
    r.experiment = c[0];
    r.kind = c[1];
    r.p = real(c[2]);
    r.q = real(c[3]);
    if (!c[4].empty()) r.bc = parse_boundary(c[4]);
    r.n = parse_int<int>(c[5]);
    r.a = parse_int<int>(c[6]);
    r.b = parse_int<int>(c[7]);
    r.margin = real(c[8]);
    r.sweeps = parse_int<std::int64_t>(c[9]);
    r.burn_in = parse_int<std::int64_t>(c[10]);
    r.thin = parse_int<std::int64_t>(c[11]);
    const auto seed = parse_int<std::uint64_t>(c[12]);
    if (!seed) throw std::runtime_error("read_csv: line " + std::to_string(line_no) + " has no seed");
    r.seed = *seed;
    r.generator = c[13];
    r.metric = c[14];
    const auto value = parse_real(c[15]);
    if (!value) throw std::runtime_error("read_csv: line " + std::to_string(line_no) + " has no value");
    r.value = *value;
    r.stderr_ = real(c[16]);
    r.n_samples = parse_int<std::int64_t>(c[17]);
    r.wallclock_s = parse_real(c[18]).value_or(0.0);
    r.version = c[19];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> validate_csv(std::istream& is) {
  std::vector<std::string> problems;
  std::string line;
  if (!std::getline(is, line)) return {"empty file"};
  if (line != kCsvHeader) problems.push_back("header does not match the schema");
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto c = split_row(line);
    if (c.size() != kColumns) {
      problems.push_back(where + "expected " + std::to_string(kColumns) + " cells, found " + std::to_string(c.size()));
      continue;
    }
    if (c[0].empty()) problems.push_back(where + "experiment is empty");
    if (c[1] != "exact" && c[1] != "mc" && c[1] != "derived") problems.push_back(where + "kind must be exact, mc or derived");
    for (int i : {2, 3, 8, 16})
      if (!c[i].empty() && !parse_real(c[i])) problems.push_back(where + "column " + std::to_string(i + 1) + " is not a number");
    for (int i : {5, 6, 7, 9, 10, 11, 17})
      if (!c[i].empty() && !parse_int<long long>(c[i]))
        problems.push_back(where + "column " + std::to_string(i + 1) + " is not an integer");
    if (!c[4].empty() && c[4] != "free" && c[4] != "wired") problems.push_back(where + "bc must be free or wired");
    if (!parse_int<std::uint64_t>(c[12])) problems.push_back(where + "seed is missing");
    if (c[13].empty()) problems.push_back(where + "generator is missing");
    if (c[14].empty()) problems.push_back(where + "metric is missing");
    if (!parse_real(c[15])) problems.push_back(where + "value is not a number");
    if (!parse_real(c[18])) problems.push_back(where + "wallclock_s is not a number");
    if (c[19].empty()) problems.push_back(where + "version is missing");
    if (c[1] == "mc" && (c[9].empty() || c[17].empty()))
      problems.push_back(where + "Monte Carlo rows need sweeps and nsamples");
  }
  return problems;
}

}  // namespace rcm::harness
