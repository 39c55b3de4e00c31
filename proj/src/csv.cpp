#include "pcn/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pcn/spectral.hpp"

namespace pcn {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string provenance_line(const KeyValues& config) {
  KeyValues sorted = config;
  std::sort(sorted.begin(), sorted.end());
  std::string line = "#";
  for (const auto& [k, v] : sorted) {
    line += ' ';
    line += k;
    line += '=';
    line += v;
  }
  line += '\n';
  return line;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_grid_csv(const std::string& path, const Array& samples,
                    const KeyValues& config) {
  require(samples.size() >= 2, "write_grid_csv: need at least two samples");
  const auto m = static_cast<int>(samples.size()) - 1;
  std::string body = provenance_line(config);
  body += "s,value\n";
  for (int i = 0; i <= m; ++i) {
    body += fmt17(static_cast<double>(i) / m);
    body += ',';
    body += fmt17(samples[i]);
    body += '\n';
  }
  write_text_file(path, body);
}

void write_table_csv(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& data,
                     const KeyValues& config) {
  require(!columns.empty() && columns.size() == data.size(),
          "write_table_csv: column/name count mismatch");
  const std::size_t rows = data.front().size();
  for (const auto& col : data)
    require(col.size() == rows, "write_table_csv: ragged columns");
  std::string body = provenance_line(config);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) body += ',';
    body += columns[c];
  }
  body += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) body += ',';
      body += fmt17(data[c][r]);
    }
    body += '\n';
  }
  write_text_file(path, body);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          double s_norm, int n_coeffs, const KeyValues& config) {
  require(traj.states.size() == traj.snapshot_steps.size() &&
              !traj.states.empty(),
          "write_trajectory_csv: malformed trajectory");
  require(traj.qv.size() == static_cast<std::size_t>(traj.n_steps) + 1,
          "write_trajectory_csv: missing quadratic-variation cache");
  require(n_coeffs >= 0 && n_coeffs <= traj.states.front().size(),
          "write_trajectory_csv: n_coeffs out of range");

  std::string body = provenance_line(config);
  body += "k,t,accepted,qv,norm_s";
  for (int j = 1; j <= n_coeffs; ++j) body += ",coeff_" + std::to_string(j);
  body += '\n';

  std::size_t flag_pos = 0;
  long long accepted = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const long long k = traj.snapshot_steps[i];
    while (flag_pos < static_cast<std::size_t>(k)) {
      accepted += traj.flags[flag_pos];
      ++flag_pos;
    }
    body += std::to_string(k);
    body += ',';
    body += fmt17(traj.delta * static_cast<double>(k));
    body += ',';
    body += std::to_string(accepted);
    body += ',';
    body += fmt17(traj.qv[static_cast<std::size_t>(k)]);
    body += ',';
    body += fmt17(sobolev_norm(traj.states[i], s_norm));
    for (int j = 0; j < n_coeffs; ++j) {
      body += ',';
      body += fmt17(traj.states[i][j]);
    }
    body += '\n';
  }
  write_text_file(path, body);
}

}  // namespace pcn
