#include "scootsim/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scootsim/errors.hpp"

namespace scootsim {

namespace {

constexpr char kHeader[] =
    "t,x_p,y_p,psi,v,delta,phi,d_meas_c,d_meas_l,d_meas_r,"
    "d_filt_c,d_filt_l,d_filt_r,d_crit,v_cmd,v_safe,true_min_distance,collision";
constexpr int kColumns = 18;

double parse_number(const std::string& field) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw InputError("malformed numeric field in trace CSV: '" + field + "'");
  return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::string out;
  out.reserve(trace.size() * 200 + 256);
  out += kHeader;
  out += '\n';
  for (const TraceRecord& r : trace) {
    const double cells[kColumns - 1] = {
        r.t,        r.x_p,      r.y_p,      r.psi,      r.v,
        r.delta,    r.phi,      r.d_meas_c, r.d_meas_l, r.d_meas_r,
        r.d_filt_c, r.d_filt_l, r.d_filt_r, r.d_crit,   r.v_cmd,
        r.v_safe,   r.true_min_distance};
    for (double c : cells) {
      out += format_double(c);
      out += ',';
    }
    out += r.collision ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open trace output file: " + path);
  const std::string csv = trace_to_csv(trace);
  f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!f) throw InputError("failed writing trace output file: " + path);
}

std::vector<TraceRecord> trace_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw InputError("trace CSV header mismatch");
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != kColumns)
      throw InputError("trace CSV row has wrong column count");
    TraceRecord r;
    r.t = parse_number(fields[0]);
    r.x_p = parse_number(fields[1]);
    r.y_p = parse_number(fields[2]);
    r.psi = parse_number(fields[3]);
    r.v = parse_number(fields[4]);
    r.delta = parse_number(fields[5]);
    r.phi = parse_number(fields[6]);
    r.d_meas_c = parse_number(fields[7]);
    r.d_meas_l = parse_number(fields[8]);
    r.d_meas_r = parse_number(fields[9]);
    r.d_filt_c = parse_number(fields[10]);
    r.d_filt_l = parse_number(fields[11]);
    r.d_filt_r = parse_number(fields[12]);
    r.d_crit = parse_number(fields[13]);
    r.v_cmd = parse_number(fields[14]);
    r.v_safe = parse_number(fields[15]);
    r.true_min_distance = parse_number(fields[16]);
    if (fields[17] == "0") r.collision = false;
    else if (fields[17] == "1") r.collision = true;
    else throw InputError("trace CSV collision flag must be 0 or 1");
    trace.push_back(r);
  }
  return trace;
}

std::vector<TraceRecord> load_trace_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open trace file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return trace_from_csv(buf.str());
}

}  // namespace scootsim
