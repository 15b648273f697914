#include "rcm/harness/plots.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace rcm::harness {

namespace {

constexpr const char* kPrelude = R"PY(#!/usr/bin/env python3
import csv
import math
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV = os.path.join(HERE, "@CSV@")


def rows():
    with open(CSV, newline="") as fh:
        yield from csv.DictReader(fh)

)PY";

constexpr const char* kThreshold = R"PY(
series = defaultdict(list)
for r in rows():
    if r["metric"] == "P(C_h)":
        key = (r["q"], int(r["n"]))
        series[key].append((float(r["p"]), float(r["value"]), float(r["stderr"] or 0)))

fig, ax = plt.subplots()
for (q, n), pts in sorted(series.items(), key=lambda kv: (float(kv[0][0]), kv[0][1])):
    pts.sort()
    ax.errorbar([p for p, _, _ in pts], [v for _, v, _ in pts], yerr=[s for _, _, s in pts],
                marker="o", capsize=2, label=f"q={q}, n={n}")
ax.axhline(0.5, color="grey", lw=0.5)
ax.set_xlabel("p")
ax.set_ylabel("crossing probability of [-2n,2n] x [-n,n]")
ax.legend()
fig.savefig(os.path.join(HERE, "threshold.png"), dpi=150)
)PY";

constexpr const char* kDecay = R"PY(
points = defaultdict(list)
fits = defaultdict(dict)
for r in rows():
    key = (r["q"], r["p"])
    if r["metric"] == "P(0<->x)" and float(r["value"]) > 0:
        points[key].append((int(r["n"]), math.log(float(r["value"]))))
    elif r["metric"] in ("slope", "intercept"):
        fits[key][r["metric"]] = float(r["value"])

fig, ax = plt.subplots()
for key, pts in sorted(points.items()):
    pts.sort()
    xs = [d for d, _ in pts]
    line = ax.scatter(xs, [y for _, y in pts], label=f"q={key[0]}, p={key[1]}")
    fit = fits.get(key, {})
    if "slope" in fit and "intercept" in fit:
        ax.plot(xs, [fit["intercept"] + fit["slope"] * d for d in xs], color=line.get_facecolor()[0])
ax.set_xlabel("distance d")
ax.set_ylabel("log P(0 <-> (d,0))")
ax.legend()
fig.savefig(os.path.join(HERE, "decay.png"), dpi=150)
)PY";

}  // namespace

std::string plot_script(const std::vector<ResultRecord>& records, const std::string& csv_relative_path) {
  if (records.empty()) throw std::invalid_argument("plot script: no records");
  const std::string& kind = records.front().experiment;
  for (const auto& r : records)
    if (r.experiment != kind)
      throw std::invalid_argument("plot script: records mix '" + kind + "' and '" + r.experiment + "'");
  const char* body = nullptr;
  if (kind == "threshold")
    body = kThreshold;
  else if (kind == "decay")
    body = kDecay;
  else
    throw std::invalid_argument("plot script: no plot is defined for '" + kind + "' records");

  std::string script = kPrelude;
  const std::string token = "@CSV@";
  script.replace(script.find(token), token.size(), csv_relative_path);
  return script + body;
}

std::string emit_plot_script(const std::vector<ResultRecord>& records, const std::string& csv_path,
                             const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir = fs::absolute(out_dir);
  const std::string rel = fs::relative(fs::absolute(csv_path), dir).generic_string();
  const std::string text = plot_script(records, rel);
  const fs::path script = dir / ("plot_" + records.front().experiment + ".py");
  std::ofstream os(script);
  if (!os) throw std::runtime_error("cannot write " + script.string());
  os << text;
  return script.string();
}

}  // namespace rcm::harness
