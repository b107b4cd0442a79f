#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "boxgauge/classical.hpp"
#include "boxgauge/numeric.hpp"
#include "boxgauge/qline.hpp"

namespace boxgauge::io {

/// Shortest round-trip representation is not needed; 17 significant digits are.
std::string format_double(double v);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// t,x,v,p0,pchi
std::string trajectory_csv(const std::vector<classical::ClassicalState>& trajectory,
                           const model::DrivingField& field, const model::PhysicalConstants& consts);

/// t_hit,wall,v_in,v_out
std::string events_csv(const std::vector<classical::ReflectionEvent>& events);

/// row,col,re,im with 1-based mode indices, row-major.
std::string matrix_csv(const numeric::CMatrix& M);

/// {"N", "operator", "theta", "entries": [[[re, im], ...], ...]}
nlohmann::json matrix_json(const numeric::CMatrix& M, const std::string& op, double theta);

/// x,re,im,abs2
std::string packet_csv(const qline::GridWavepacket& packet);

/// t,mean_x,mean_p,var_x
std::string moments_csv(const std::vector<qline::EhrenfestSample>& samples);

/// Generic CSV from a header and numeric rows.
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace boxgauge::io
