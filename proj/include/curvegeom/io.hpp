#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "curvegeom/fourier.hpp"
#include "curvegeom/global_geometry.hpp"
#include "curvegeom/sweep.hpp"

namespace curvegeom {

/// Shortest decimal that round-trips, capped at 12 significant digits.
inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // fold out the negative zero
  char buf[64];
  for (int prec = 1; prec <= 12; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace detail {

inline nlohmann::json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return nlohmann::json::parse(fmt_double(x));
}

}  // namespace detail

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "rename failed: " + ec.message());
}

/// Fourier curve file:
/// { "period": P, "fourier": { "x": {"cos": [...], "sin": [...]}, "y": ..., "z": ... } }
/// Coordinate j of each array multiplies cos/sin(2*pi*j*t/P).
inline FourierCurve fourier_from_json(const nlohmann::json& j) {
  FourierCurve fc;
  if (!j.contains("period") || !j["period"].is_number())
    throw Error(ErrorCode::InvalidArgument, "curve file needs a numeric 'period'");
  fc.period = j["period"].get<double>();
  if (!(fc.period > 0.0)) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  if (!j.contains("fourier") || !j["fourier"].is_object())
    throw Error(ErrorCode::InvalidArgument, "curve file needs a 'fourier' object");
  const char* axes[3] = {"x", "y", "z"};
  for (int c = 0; c < 3; ++c) {
    if (!j["fourier"].contains(axes[c])) continue;
    const auto& a = j["fourier"][axes[c]];
    if (a.contains("cos")) fc.cos_c[c] = a["cos"].get<std::vector<double>>();
    if (a.contains("sin")) fc.sin_c[c] = a["sin"].get<std::vector<double>>();
  }
  fc.label = j.value("label", std::string("fourier"));
  return fc;
}

inline CurveSpec load_curve_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "bad JSON in " + path.string() + ": " + e.what());
  }
  return fourier_curve(fourier_from_json(j));
}

inline nlohmann::json to_json(const QuantityDiag& q) {
  return {{"value", detail::jnum(q.value)},
          {"delta", detail::jnum(q.delta)},
          {"m_used", q.m_used},
          {"converged", q.converged}};
}

inline nlohmann::json to_json(const GeometrySummary& s) {
  nlohmann::json j;
  j["frame"] = s.frame_kind;
  j["epsilon"] = detail::jnum(s.epsilon);
  j["Tw"] = to_json(s.tw);
  j["phi_T"] = to_json(s.phi_T);
  j["Wr"] = to_json(s.wr);
  j["Lk"] = to_json(s.lk);
  j["Lk_integer"] = s.lk_integer;
  j["Lk_residual"] = detail::jnum(s.lk_residual);
  j["Tw_g"] = detail::jnum(s.tw_g);
  j["phi_g"] = detail::jnum(s.phi_g);
  j["Lk_g"] = detail::jnum(s.lk_g);
  j["cwf_residual"] = detail::jnum(s.cwf_residual);
  j["cwf_g_residual"] = detail::jnum(s.cwf_g_residual);
  j["min_overlap"] = detail::jnum(s.min_overlap);
  j["phase_bridged"] = s.phase_bridged;
  j["converged"] = s.converged;
  return j;
}

inline const char* kSweepCsvHeader =
    "n,alpha,a,Wr,Tw_g,phi_g,int_tau,phi_T,Lk_g,cwf_residual,m_used,converged";

inline std::string sweep_rows_csv(std::span<const SweepRow> rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    for (double v : {r.alpha, r.a, r.Wr, r.Tw_g, r.phi_g, r.int_tau, r.phi_T, r.Lk_g,
                     r.cwf_residual}) {
      out += ',';
      out += fmt_double(v);
    }
    out += ',';
    out += std::to_string(r.m_used);
    out += ',';
    out += r.converged ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline nlohmann::json sweep_rows_json(std::span<const SweepRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["n"] = r.n;
    j["alpha"] = detail::jnum(r.alpha);
    j["a"] = detail::jnum(r.a);
    j["Wr"] = detail::jnum(r.Wr);
    j["Tw_g"] = detail::jnum(r.Tw_g);
    j["phi_g"] = detail::jnum(r.phi_g);
    j["int_tau"] = detail::jnum(r.int_tau);
    j["phi_T"] = detail::jnum(r.phi_T);
    j["Lk_g"] = detail::jnum(r.Lk_g);
    j["cwf_residual"] = detail::jnum(r.cwf_residual);
    j["m_used"] = r.m_used;
    j["converged"] = r.converged;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows) {
  write_file_atomic(path, sweep_rows_csv(rows));
}

inline void write_sweep_json(const std::filesystem::path& path, std::span<const SweepRow> rows) {
  write_file_atomic(path, sweep_rows_json(rows).dump(2) + "\n");
}

}  // namespace curvegeom
