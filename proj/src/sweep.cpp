#include "scootsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "scootsim/errors.hpp"
#include "scootsim/scenario_io.hpp"
#include "scootsim/trace_io.hpp"

namespace scootsim {

namespace {

using nlohmann::json;

std::string sanitize_cell(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string value_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  return sanitize_cell(v.dump());
}

}  // namespace

SweepResult sweep(const Scenario& base, const std::vector<SweepAxis>& axes,
                  int threads) {
  SweepResult result;
  result.axes = axes;

  std::size_t total = 1;
  for (const SweepAxis& axis : axes) {
    if (axis.values.empty())
      throw ConfigError("sweep axis '" + axis.path + "' has no values");
    total *= axis.values.size();
  }
  result.points.resize(total);

  const json base_json = scenario_to_json(base);
  std::size_t worker_count = threads > 0
                                 ? static_cast<std::size_t>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  worker_count = std::min(worker_count, total);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) break;
      SweepPoint& point = result.points[i];
      point.index = i;
      // Decompose the flat index, last axis fastest.
      std::size_t rem = i;
      point.values.resize(axes.size());
      for (std::size_t a = axes.size(); a-- > 0;) {
        const std::size_t n = axes[a].values.size();
        point.values[a] = axes[a].values[rem % n];
        rem /= n;
      }
      try {
        json doc = base_json;
        for (std::size_t a = 0; a < axes.size(); ++a)
          apply_override_json(doc, axes[a].path, point.values[a]);
        const RunResult r = run(scenario_from_json(doc));
        point.metrics = r.metrics;
        point.ok = r.ok;
        point.error = r.error;
      } catch (const std::exception& e) {
        point.ok = false;
        point.error = e.what();
      }
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) workers.emplace_back(work);
  for (std::thread& w : workers) w.join();

  for (const SweepPoint& p : result.points) {
    if (!p.ok) ++result.failures;
    if (p.metrics.collided) ++result.collisions;
    result.worst_min_true_distance =
        std::min(result.worst_min_true_distance, p.metrics.min_true_distance);
  }
  return result;
}

std::vector<SweepAxis> sweep_axes_from_json(const json& grid) {
  if (!grid.contains("axes") || !grid["axes"].is_object())
    throw InputError("sweep grid needs an 'axes' object");
  std::vector<SweepAxis> axes;
  for (const auto& [path, spec] : grid["axes"].items()) {
    SweepAxis axis;
    axis.path = path;
    if (spec.is_array()) {
      for (const json& v : spec) axis.values.push_back(v);
    } else if (spec.is_object() && spec.contains("start") && spec.contains("count")) {
      if (!spec["start"].is_number() ||
          (spec.contains("step") && !spec["step"].is_number()))
        throw InputError("axis range start/step must be numbers");
      const std::int64_t count = spec["count"].get<std::int64_t>();
      if (count <= 0) throw InputError("axis range count must be positive");
      // Integer endpoints stay integers (exact seeds); otherwise doubles.
      const bool integral =
          spec["start"].is_number_integer() &&
          (!spec.contains("step") || spec["step"].is_number_integer());
      if (integral) {
        const std::int64_t start = spec["start"].get<std::int64_t>();
        const std::int64_t step =
            spec.contains("step") ? spec["step"].get<std::int64_t>() : 1;
        for (std::int64_t k = 0; k < count; ++k)
          axis.values.push_back(start + k * step);
      } else {
        const double start = spec["start"].get<double>();
        const double step =
            spec.contains("step") ? spec["step"].get<double>() : 1.0;
        for (std::int64_t k = 0; k < count; ++k)
          axis.values.push_back(start + static_cast<double>(k) * step);
      }
    } else {
      throw InputError("axis '" + path +
                       "' must be a value array or {start, step?, count} range");
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

std::string sweep_table_to_csv(const SweepResult& result) {
  std::string out = "index";
  for (const SweepAxis& axis : result.axes) {
    out += ',';
    out += sanitize_cell(axis.path);
  }
  out += ",min_true_distance,standstill_distance,time_to_stop,recovery_time,"
         "stop_events,collided,ok,error\n";
  for (const SweepPoint& p : result.points) {
    out += std::to_string(p.index);
    for (const json& v : p.values) {
      out += ',';
      out += value_cell(v);
    }
    const RunMetrics& m = p.metrics;
    out += ',';
    out += format_double(m.min_true_distance);
    out += ',';
    out += format_double(m.standstill_distance);
    out += ',';
    out += format_double(m.time_to_stop);
    out += ',';
    out += format_double(m.recovery_time);
    out += ',';
    out += std::to_string(m.stop_events);
    out += ',';
    out += m.collided ? '1' : '0';
    out += ',';
    out += p.ok ? '1' : '0';
    out += ',';
    out += sanitize_cell(p.error);
    out += '\n';
  }
  return out;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open sweep output file: " + path);
  const std::string csv = sweep_table_to_csv(result);
  f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!f) throw InputError("failed writing sweep output file: " + path);
}

}  // namespace scootsim
