#include "fraclayer/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "fraclayer/energy.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/solver.hpp"

namespace fraclayer {

std::string sha1_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string git_blob_hash(const std::string& data) {
  std::string blob = "blob " + std::to_string(data.size());
  blob.push_back('\0');
  return sha1_hex(blob + data);
}

void write_f64_le(std::ostream& out, const Eigen::MatrixXd& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(M(i, j));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      char buf[8];
      std::memcpy(buf, &bits, 8);
      out.write(buf, 8);
    }
}

Eigen::MatrixXd read_f64_le(std::istream& in, int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      char buf[8];
      if (!in.read(buf, 8)) throw std::runtime_error("read_f64_le: truncated data");
      std::uint64_t bits;
      std::memcpy(&bits, buf, 8);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      M(i, j) = std::bit_cast<double>(bits);
    }
  return M;
}

std::string fmt_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void save_profile_csv(const Profile& p, double s, const std::string& path) {
  nlohmann::json hdr = {{"a", p.grid.a},         {"b", p.grid.b},     {"n_cells", p.grid.n_cells},
                        {"left", p.left},         {"right", p.right}, {"s", s}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# " << hdr.dump() << "\nx,u\n";
  for (int i = 0; i <= p.n_cells(); ++i)
    out << fmt_double(p.grid.node(i)) << ',' << fmt_double(p.values[i]) << '\n';
}

Profile load_profile_csv(const std::string& path, double* s) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# ", 0) != 0) throw std::invalid_argument("profile csv: missing JSON header line");
  const auto hdr = nlohmann::json::parse(line.substr(2));
  std::getline(in, line);
  Grid1D g(hdr.at("a").get<double>(), hdr.at("b").get<double>(), hdr.at("n_cells").get<int>());
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  if (s) *s = hdr.at("s").get<double>();
  return make_profile(g, Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()),
                      hdr.at("left").get<double>(), hdr.at("right").get<double>());
}

void append_breakdown_csv(const std::string& path, double R, double s, const EnergyBreakdown& e) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (fresh) out << "R,s,k_in_in,k_in_out,potential,total\n";
  out << fmt_double(R) << ',' << fmt_double(s) << ',' << fmt_double(e.k_in_in) << ','
      << fmt_double(e.k_in_out) << ',' << fmt_double(e.potential) << ',' << fmt_double(e.total) << '\n';
}

void save_trace_csv(const std::string& path, const std::vector<SolveTraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iteration,energy,grad_norm\n";
  for (const auto& r : trace)
    out << r.iteration << ',' << fmt_double(r.energy) << ',' << fmt_double(r.grad_norm) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << columns[j];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw shape_error("write_table_csv: row width mismatch");
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << fmt_double(row[j]);
    out << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_manifest(const std::string& dir, const nlohmann::json& run, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  namespace fs = std::filesystem;
  nlohmann::json m;
  m["run"] = run;
  m["run_hash"] = git_blob_hash(run.dump());
  auto hashes = [&](const std::vector<std::string>& files, bool relative) {
    nlohmann::json h = nlohmann::json::object();
    for (const auto& f : files) {
      const std::string key = relative ? fs::path(f).filename().string() : f;
      h[key] = git_blob_hash(read_file(f));
    }
    return h;
  };
  m["inputs"] = hashes(inputs, false);
  m["outputs"] = hashes(outputs, true);
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << m.dump(2) << '\n';
}

}  // namespace fraclayer
