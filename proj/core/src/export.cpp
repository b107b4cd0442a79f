#include "boxgauge/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "boxgauge/errors.hpp"

namespace boxgauge::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::string trajectory_csv(const std::vector<classical::ClassicalState>& trajectory,
                           const model::DrivingField& field, const model::PhysicalConstants& consts) {
  std::ostringstream os;
  os << "t,x,v,p0,pchi\n";
  for (const auto& s : trajectory) {
    classical::ClassicalState zero = s;
    zero.gauge = classical::Gauge::Zero;
    classical::ClassicalState chi = s;
    chi.gauge = classical::Gauge::Chi;
    os << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.v) << ','
       << format_double(classical::canonical_momentum(zero, field, consts)) << ','
       << format_double(classical::canonical_momentum(chi, field, consts)) << '\n';
  }
  return os.str();
}

std::string events_csv(const std::vector<classical::ReflectionEvent>& events) {
  std::ostringstream os;
  os << "t_hit,wall,v_in,v_out\n";
  for (const auto& e : events) {
    os << format_double(e.t_hit) << ',' << (e.wall == classical::Wall::Left ? "left" : "right") << ','
       << format_double(e.v_in) << ',' << format_double(e.v_out) << '\n';
  }
  return os.str();
}

std::string matrix_csv(const numeric::CMatrix& M) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      os << i + 1 << ',' << j + 1 << ',' << format_double(M(i, j).real()) << ',' << format_double(M(i, j).imag())
         << '\n';
    }
  }
  return os.str();
}

nlohmann::json matrix_json(const numeric::CMatrix& M, const std::string& op, double theta) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"N", M.rows()}, {"operator", op}, {"theta", theta}, {"entries", std::move(rows)}};
}

std::string packet_csv(const qline::GridWavepacket& packet) {
  std::ostringstream os;
  os << "x,re,im,abs2\n";
  for (std::size_t j = 0; j < packet.samples.size(); ++j) {
    const auto c = packet.samples[j];
    os << format_double(packet.grid.x(j)) << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << ','
       << format_double(std::norm(c)) << '\n';
  }
  return os.str();
}

std::string moments_csv(const std::vector<qline::EhrenfestSample>& samples) {
  std::ostringstream os;
  os << "t,mean_x,mean_p,var_x\n";
  for (const auto& s : samples) {
    os << format_double(s.t) << ',' << format_double(s.mean_x) << ',' << format_double(s.mean_p) << ','
       << format_double(s.var_x) << '\n';
  }
  return os.str();
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace boxgauge::io
