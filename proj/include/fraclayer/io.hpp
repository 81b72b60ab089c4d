#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "fraclayer/grid.hpp"

namespace fraclayer {

struct EnergyBreakdown;
struct SolveTraceRow;

std::string sha1_hex(const std::string& data);
/// Hash of "blob <len>\0<data>", as git computes it.
std::string git_blob_hash(const std::string& data);

void write_f64_le(std::ostream& out, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_f64_le(std::istream& in, int rows, int cols);

/// Shortest round-trip decimal form.
std::string fmt_double(double x);

/// First line "# {json header}", then "x,u" rows.
void save_profile_csv(const Profile& p, double s, const std::string& path);
Profile load_profile_csv(const std::string& path, double* s = nullptr);

void append_breakdown_csv(const std::string& path, double R, double s, const EnergyBreakdown& e);

void save_trace_csv(const std::string& path, const std::vector<SolveTraceRow>& trace);

/// Header row, then one row per entry, shortest round-trip formatting.
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

std::string read_file(const std::string& path);

/// manifest.json in dir: the run description plus git-style hashes of the named files.
void write_manifest(const std::string& dir, const nlohmann::json& run, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs);

}  // namespace fraclayer
