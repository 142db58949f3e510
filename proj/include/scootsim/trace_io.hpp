#pragma once

#include <string>
#include <vector>

#include "scootsim/simulation.hpp"

namespace scootsim {

// Shortest-readable formatting used for every numeric CSV cell (9 significant
// digits, '.' decimal point).
std::string format_double(double x);

std::string trace_to_csv(const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace);

std::vector<TraceRecord> trace_from_csv(const std::string& csv);
std::vector<TraceRecord> load_trace_csv(const std::string& path);

}  // namespace scootsim
