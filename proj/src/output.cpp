#include "escat/output.hpp"

#include <cstdio>
#include <fstream>

#include "escat/errors.hpp"
#include "json.hpp"

namespace escat {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_csv(const std::string& path, const OutputMeta& meta) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << "# escat " << meta.subcommand << "\n";
  out << "# config_hash = " << meta.config_hash << "\n";
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const UnitSystem& units, const OutputMeta& meta) {
  std::ofstream out = open_csv(path, meta);
  out << "t_fs,x_nm,y_nm,z_nm,px_mec,py_mec,pz_mec,gamma\n";
  const double nm_per_norm = 1e9 * units.to_meters(1.0);
  const double fs_per_norm = 1e15 * units.to_seconds(1.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec3& r = traj.positions()[i];
    const ElectronState s = traj.state(i);
    out << num(traj.time(i) * fs_per_norm) << "," << num(r.x * nm_per_norm) << ","
        << num(r.y * nm_per_norm) << "," << num(r.z * nm_per_norm) << "," << num(s.momentum.x)
        << "," << num(s.momentum.y) << "," << num(s.momentum.z) << "," << num(s.gamma()) << "\n";
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_map_csv(const std::string& path, const RadiationMap& map, const OutputMeta& meta,
                   const std::vector<double>* standard_error) {
  const AngularSpectralGrid& g = map.grid;
  if (standard_error && standard_error->size() != map.values.size()) {
    throw ConfigError("standard-error vector does not match the map layout");
  }
  std::ofstream out = open_csv(path, meta);
  out << "theta_rad,phi_rad,omega_over_omega0,d2e_dOmega_domega_eV";
  if (standard_error) out << ",se_eV";
  out << "\n";
  for (std::size_t it = 0; it < g.n_theta(); ++it) {
    for (std::size_t ip = 0; ip < g.n_phi(); ++ip) {
      const std::size_t d = it * g.n_phi() + ip;
      for (std::size_t k = 0; k < g.n_omega(); ++k) {
        out << num(g.thetas()[it]) << "," << num(g.phis()[ip]) << "," << num(g.omegas()[k])
            << "," << num(map.values[d * g.n_omega() + k]);
        if (standard_error) out << "," << num((*standard_error)[d * g.n_omega() + k]);
        out << "\n";
      }
    }
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_spectrum_csv(const std::string& path, const std::vector<double>& omegas,
                        const std::vector<double>& de_domega_eV, const OutputMeta& meta) {
  if (omegas.size() != de_domega_eV.size()) {
    throw ConfigError("spectrum arrays differ in length");
  }
  std::ofstream out = open_csv(path, meta);
  out << "omega_over_omega0,de_domega_eV\n";
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    out << num(omegas[k]) << "," << num(de_domega_eV[k]) << "\n";
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_thomson_csv(const std::string& path, const std::vector<ThomsonScanRow>& rows,
                       const OutputMeta& meta) {
  std::ofstream out = open_csv(path, meta);
  out << "r0_over_lambda,ratio_forward,ratio_perpendicular_y,ratio_z_pole,ratio_total\n";
  for (const ThomsonScanRow& r : rows) {
    out << num(r.r0_over_lambda) << "," << num(r.ratio_forward) << ","
        << num(r.ratio_perpendicular_y) << "," << num(r.ratio_z_pole) << ","
        << num(r.ratio_total) << "\n";
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_compare_csv(const std::string& path, const CompareReport& report,
                       const OutputMeta& meta) {
  std::ofstream out = open_csv(path, meta);
  out << "theta_rad,phi_rad,incoherent_eV_sr,incoherent_se_eV_sr,coherent_eV_sr,"
         "coherent_se_eV_sr,point_eV_sr,eq1_ratio\n";
  for (const CompareRow& r : report.rows) {
    out << num(r.direction.theta) << "," << num(r.direction.phi) << "," << num(r.incoherent_eV_sr)
        << "," << num(r.incoherent_se) << "," << num(r.coherent_eV_sr) << ","
        << num(r.coherent_se) << "," << num(r.point_eV_sr) << "," << num(r.eq1_ratio) << "\n";
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_wigner_plane_csv(const std::string& path, const std::vector<double>& x_m,
                            const std::vector<double>& p_mec, const std::vector<double>& w,
                            const OutputMeta& meta) {
  if (w.size() != x_m.size() * p_mec.size()) {
    throw ConfigError("phase-space plane does not match its axes");
  }
  std::ofstream out = open_csv(path, meta);
  out << "x_m,p_mec,w\n";
  for (std::size_t i = 0; i < x_m.size(); ++i) {
    for (std::size_t j = 0; j < p_mec.size(); ++j) {
      out << num(x_m[i]) << "," << num(p_mec[j]) << "," << num(w[i * p_mec.size() + j]) << "\n";
    }
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_spreading_csv(const std::string& path, const std::vector<double>& t_fs,
                         const std::vector<double>& sigma_m, const OutputMeta& meta) {
  if (t_fs.size() != sigma_m.size()) throw ConfigError("spreading arrays differ in length");
  std::ofstream out = open_csv(path, meta);
  out << "t_fs,sigma_m\n";
  for (std::size_t i = 0; i < t_fs.size(); ++i) {
    out << num(t_fs[i]) << "," << num(sigma_m[i]) << "\n";
  }
  if (!out) throw ConfigError("short write to " + path);
}

std::string manifest_json(const ManifestInfo& info) {
  nlohmann::json j;
  j["subcommand"] = info.subcommand;
  j["version"] = "0.1.0";
  j["config_hash"] = config_hash(info.config);
  j["config"] = serialize_config(info.config);
  j["seed"] = info.config.seed;
  j["threads"] = info.threads;
  j["wall_time_s"] = info.wall_time_s;
  j["files"] = info.files;
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const ManifestInfo& info) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << manifest_json(info);
  if (!out) throw ConfigError("short write to " + path);
}

}  // namespace escat
