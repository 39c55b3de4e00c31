#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcn/chain.hpp"

// CSV/JSON output: comma separated, '#'-prefixed provenance line carrying the
// fully resolved configuration, then a column header row, LF endings,
// 17-significant-digit floats (round-trip exact for doubles).

namespace pcn {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// %.17g
std::string fmt17(double v);

// "# key1=value1 key2=value2 ..." with keys sorted for byte reproducibility
std::string provenance_line(const KeyValues& config);

// throws std::runtime_error when the file cannot be written
void write_text_file(const std::string& path, const std::string& content);

// header `s,value`: one row per node of the uniform grid s_i = i/m
void write_grid_csv(const std::string& path, const Array& samples,
                    const KeyValues& config);

// named columns of equal length
void write_table_csv(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& data,
                     const KeyValues& config);

// header `k,t,accepted,qv,norm_s,coeff_1..coeff_J`, one row per snapshot:
// cumulative accepted count, cached quadratic variation, H^s norm at the
// given index, and the first n_coeffs coefficients
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          double s_norm, int n_coeffs, const KeyValues& config);

}  // namespace pcn
