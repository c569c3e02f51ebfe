#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "doslab/io.hpp"
#include "doslab/lattice.hpp"
#include "doslab/models.hpp"

namespace doslab {

inline nlohmann::json complex_to_json(Complex z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

/// One window's worth of DOS diagnostics: moments, boundary/disk samples,
/// functional values along the different routes, and Monte-Carlo statistics.
struct DOSReport {
  std::string model_id;
  LatticeWindow window;
  std::vector<std::uint64_t> seeds;
  std::vector<Complex> moments;                            // b_0 .. b_K, b_0 = 1
  std::vector<std::pair<double, Complex>> phi_samples;     // (t, phi_Lambda(e^it))
  std::vector<std::pair<Complex, Complex>> psi_samples;    // (z, psi_Lambda(z))
  std::map<std::string, Complex> L_values;
  std::map<std::string, Complex> Ltilde_values;
  std::map<std::string, Complex> quad_values;
  std::map<std::string, Complex> pairing_values;
  std::map<std::string, std::pair<Complex, double>> mc;    // f-id -> (mean, stderr)

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["model"] = model_id;
    j["window"] = {{"lo", window.lo}, {"cell_size", window.cell_size}, {"n_cells", window.n_cells},
                   {"size", window.size()}};
    j["seeds"] = seeds;
    nlohmann::json jm = nlohmann::json::array();
    for (const Complex& b : moments) jm.push_back(complex_to_json(b));
    j["moments"] = jm;
    nlohmann::json jphi = nlohmann::json::array();
    for (const auto& [t, v] : phi_samples) jphi.push_back({t, v.real(), v.imag()});
    j["phi_samples"] = jphi;
    nlohmann::json jpsi = nlohmann::json::array();
    for (const auto& [z, v] : psi_samples) jpsi.push_back({z.real(), z.imag(), v.real(), v.imag()});
    j["psi_samples"] = jpsi;
    auto map_to_json = [](const std::map<std::string, Complex>& m) {
      nlohmann::json out = nlohmann::json::object();
      for (const auto& [k, v] : m) out[k] = complex_to_json(v);
      return out;
    };
    j["L"] = map_to_json(L_values);
    j["L_tilde"] = map_to_json(Ltilde_values);
    j["L_quadrature"] = map_to_json(quad_values);
    j["L_pairing"] = map_to_json(pairing_values);
    nlohmann::json jmc = nlohmann::json::object();
    for (const auto& [k, v] : mc) jmc[k] = {{"mean", complex_to_json(v.first)}, {"stderr", v.second}};
    j["mc"] = jmc;
    return j;
  }
};

/// Spectrum CSV, columns re,im.
inline void write_spectrum_csv(const std::filesystem::path& path,
                               const std::vector<Complex>& eigenvalues) {
  CsvWriter csv(path);
  csv.row({"re", "im"});
  for (const Complex& lam : eigenvalues)
    csv.row({format_double(lam.real()), format_double(lam.imag())});
}

/// phi/psi sample CSV, columns t_or_re,im_of_arg,re_val,im_val.
inline void write_samples_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<Complex, Complex>>& samples) {
  CsvWriter csv(path);
  csv.row({"t_or_re", "im_of_arg", "re_val", "im_val"});
  for (const auto& [arg, val] : samples)
    csv.row({format_double(arg.real()), format_double(arg.imag()), format_double(val.real()),
             format_double(val.imag())});
}

}  // namespace doslab
