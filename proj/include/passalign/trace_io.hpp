#pragma once

// CSV persistence for simulation traces. Column order is fixed so downstream
// tooling can rely on it; doubles are written in shortest round-trip form so
// a written trace reads back to the exact same values, and files are staged
// to a temporary name and renamed into place.

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "passalign/metrics.hpp"
#include "passalign/types.hpp"

namespace passalign {

inline constexpr std::string_view kTraceHeader =
    "t_s,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,i,beta_rad,theta_rad,dcc_m,"
    "mu,fn_total_n,ft_total_n,p1_n,p2_n,p3_n,fest_z_n,fref_n,slip_flag";

inline void append_double(std::string& out, double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string trace_to_csv(const Trace& trace) {
  std::string out;
  out.reserve(trace.rows.size() * 220 + 256);
  out.append(kTraceHeader);
  out.push_back('\n');
  for (const TraceRow& r : trace.rows) {
    append_double(out, r.t);
    const double pose[7] = {r.position.x(),       r.position.y(),
                            r.position.z(),       r.orientation.w(),
                            r.orientation.x(),    r.orientation.y(),
                            r.orientation.z()};
    for (double v : pose) {
      out.push_back(',');
      append_double(out, v);
    }
    for (int k = 0; k < 6; ++k) {
      out.push_back(',');
      append_double(out, r.twist[k]);
    }
    out.push_back(',');
    out.append(std::to_string(r.contact_count));
    const double vals[6] = {r.beta, r.theta,    r.d_cc,
                            r.mu,   r.fn_total, r.ft_total};
    for (double v : vals) {
      out.push_back(',');
      append_double(out, v);
    }
    for (double p : r.pressures) {
      out.push_back(',');
      append_double(out, p);
    }
    out.push_back(',');
    append_double(out, r.f_est_z);
    out.push_back(',');
    append_double(out, r.f_ref);
    out.push_back(',');
    out.append(std::to_string(r.slip_mask));
    out.push_back('\n');
  }
  return out;
}

inline void write_trace_csv(const std::filesystem::path& path,
                            const Trace& trace) {
  write_file_atomic(path, trace_to_csv(trace));
}

namespace detail {

inline double parse_double_field(std::string_view s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string("trace csv: bad numeric field for ") + what);
  }
  return v;
}

inline int parse_int_field(std::string_view s, const char* what) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string("trace csv: bad integer field for ") + what);
  }
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

inline Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("trace csv is empty: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) {
    throw ConfigError("trace csv has an unexpected header: " + path.string());
  }
  Trace trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 27) {
      throw ConfigError("trace csv row has wrong field count: " +
                        path.string());
    }
    TraceRow r;
    r.t = detail::parse_double_field(f[0], "t_s");
    r.position = Vec3(detail::parse_double_field(f[1], "px"),
                      detail::parse_double_field(f[2], "py"),
                      detail::parse_double_field(f[3], "pz"));
    r.orientation = Quat(detail::parse_double_field(f[4], "qw"),
                         detail::parse_double_field(f[5], "qx"),
                         detail::parse_double_field(f[6], "qy"),
                         detail::parse_double_field(f[7], "qz"));
    for (int k = 0; k < 6; ++k) {
      r.twist[k] = detail::parse_double_field(f[8 + k], "twist");
    }
    r.contact_count = detail::parse_int_field(f[14], "i");
    r.beta = detail::parse_double_field(f[15], "beta_rad");
    r.theta = detail::parse_double_field(f[16], "theta_rad");
    r.d_cc = detail::parse_double_field(f[17], "dcc_m");
    r.mu = detail::parse_double_field(f[18], "mu");
    r.fn_total = detail::parse_double_field(f[19], "fn_total_n");
    r.ft_total = detail::parse_double_field(f[20], "ft_total_n");
    for (int j = 0; j < 3; ++j) {
      r.pressures[j] = detail::parse_double_field(f[21 + j], "p_n");
    }
    r.f_est_z = detail::parse_double_field(f[24], "fest_z_n");
    r.f_ref = detail::parse_double_field(f[25], "fref_n");
    r.slip_mask = detail::parse_int_field(f[26], "slip_flag");
    trace.rows.push_back(r);
  }
  if (trace.rows.size() >= 2) {
    trace.dt = trace.rows[1].t - trace.rows[0].t;
  }
  return trace;
}

}  // namespace passalign
