#include "escat/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "escat/constants.hpp"
#include "escat/errors.hpp"

namespace escat {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kEndpointAccelTol = 1e-8;
constexpr std::size_t kLanes = 8;

// Trajectory data after stride subsampling, laid out for the hot loop.
struct View {
  std::vector<double> t;
  std::vector<Vec3> pos;
  std::vector<Vec3> beta;
  std::vector<double> u;  // quadrature weight per sample (includes h and window)
  Vec3 beta_first, beta_last, acc_first, acc_last;
  double tau_scale_h = 0.0;  // effective step h
  bool corrections = false;  // ballistic tails + Euler-Maclaurin end terms
  bool active[3] = {false, false, false};
};

View make_view(const Trajectory& traj, const RadiationOptions& opts) {
  const std::size_t n = traj.size();
  std::size_t stride = 1;
  if (opts.samples_per_cycle > 0.0) {
    const double per_cycle = kTwoPi / traj.dt();
    stride = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(per_cycle / opts.samples_per_cycle)));
  }
  const std::size_t m = (n - 1) / stride + 1;
  const std::size_t last = (m - 1) * stride;

  View v;
  v.tau_scale_h = traj.dt() * static_cast<double>(stride);
  v.corrections = opts.apodization == Apodization::none;
  if (v.corrections) {
    // An endpoint is artifact-free when the field has died down there, or
    // when the electron sits at rest (birth sample): with beta = 0 the
    // velocity-form integrand vanishes identically before the window, so no
    // spurious truncation term arises.
    auto endpoint_ok = [&](std::size_t i) {
      return norm(traj.accelerations()[i]) < kEndpointAccelTol ||
             norm(traj.betas()[i]) < 1e-14;
    };
    if (!endpoint_ok(0) || !endpoint_ok(last)) {
      throw NumericError(
          "trajectory endpoints are still accelerating; apply a window or extend the "
          "integration until the field has passed");
    }
  }

  v.t.resize(m);
  v.pos.resize(m);
  v.beta.resize(m);
  v.u.resize(m);
  double bmax[3] = {0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = j * stride;
    v.t[j] = traj.time(i);
    v.pos[j] = traj.positions()[i];
    v.beta[j] = traj.betas()[i];
    bmax[0] = std::max(bmax[0], std::abs(v.beta[j].x));
    bmax[1] = std::max(bmax[1], std::abs(v.beta[j].y));
    bmax[2] = std::max(bmax[2], std::abs(v.beta[j].z));
    double w = 1.0;
    if (opts.apodization == Apodization::hann) {
      const double s = std::sin(M_PI * static_cast<double>(j) / static_cast<double>(m - 1));
      w = s * s;
    } else if (j == 0 || j == m - 1) {
      w = 0.5;
    }
    v.u[j] = w * v.tau_scale_h;
  }
  for (int c = 0; c < 3; ++c) v.active[c] = bmax[c] > 1e-14;
  v.beta_first = traj.betas()[0];
  v.beta_last = traj.betas()[last];
  v.acc_first = traj.accelerations()[0];
  v.acc_last = traj.accelerations()[last];
  return v;
}

struct Scratch {
  std::vector<double> re[3], im[3];
  void reset(std::size_t npad) {
    for (int c = 0; c < 3; ++c) {
      re[c].assign(npad, 0.0);
      im[c].assign(npad, 0.0);
    }
  }
};

// Accumulates B_c(omega_k) = sum_j u_j beta_cj e^{i omega_k tau_j} for the
// uniform frequency ladder omega_k = om0 + k*dom. Phases advance through a
// lane recurrence: eight frequencies are kept in flight and jump together by
// e^{i 8 dom tau_j}, so each trajectory sample costs a handful of trig calls
// regardless of the grid size.
void accumulate_direction(const View& v, const Vec3& n, std::size_t nw, double om0, double dom,
                          Scratch& s) {
  const std::size_t m = v.t.size();
  const std::size_t npad = (nw + kLanes - 1) / kLanes * kLanes;
  s.reset(npad);

  const bool ax = v.active[0], ay = v.active[1], az = v.active[2];
  double* bxr = s.re[0].data();
  double* bxi = s.im[0].data();
  double* byr = s.re[1].data();
  double* byi = s.im[1].data();
  double* bzr = s.re[2].data();
  double* bzi = s.im[2].data();

  for (std::size_t j = 0; j < m; ++j) {
    const double tau = v.t[j] - dot(n, v.pos[j]);
    const double w = v.u[j];
    const double p0 = om0 * tau;
    const double pd = dom * tau;
    double zre[kLanes], zim[kLanes];
    zre[0] = w * std::cos(p0);
    zim[0] = w * std::sin(p0);
    const double mr = std::cos(pd), mi = std::sin(pd);
    for (std::size_t l = 1; l < kLanes; ++l) {
      zre[l] = zre[l - 1] * mr - zim[l - 1] * mi;
      zim[l] = zre[l - 1] * mi + zim[l - 1] * mr;
    }
    const double p8 = 8.0 * pd;
    const double m8r = std::cos(p8), m8i = std::sin(p8);

    const double bx = v.beta[j].x, by = v.beta[j].y, bz = v.beta[j].z;
    for (std::size_t k0 = 0; k0 < npad; k0 += kLanes) {
      if (ax) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          bxr[k0 + l] += zre[l] * bx;
          bxi[k0 + l] += zim[l] * bx;
        }
      }
      if (ay) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          byr[k0 + l] += zre[l] * by;
          byi[k0 + l] += zim[l] * by;
        }
      }
      if (az) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          bzr[k0 + l] += zre[l] * bz;
          bzi[k0 + l] += zim[l] * bz;
        }
      }
      for (std::size_t l = 0; l < kLanes; ++l) {
        const double tr = zre[l] * m8r - zim[l] * m8i;
        zim[l] = zre[l] * m8i + zim[l] * m8r;
        zre[l] = tr;
      }
    }
  }
}

// Turns the accumulated sums into projected amplitudes A = B - n(n.B) for
// every frequency, applying the endpoint corrections on the way. Correction
// carrier phases ride the same uniform ladder as the main sum.
void assemble_all(const View& v, const Vec3& n, const Scratch& s,
                  const std::vector<double>& omegas, double dom, std::vector<Vec3c>& out) {
  using cplx = std::complex<double>;
  const std::size_t nw = omegas.size();
  out.assign(nw, Vec3c{});
  for (std::size_t k = 0; k < nw; ++k) {
    if (v.active[0]) out[k].x = cplx(s.re[0][k], s.im[0][k]);
    if (v.active[1]) out[k].y = cplx(s.re[1][k], s.im[1][k]);
    if (v.active[2]) out[k].z = cplx(s.re[2][k], s.im[2][k]);
  }

  if (v.corrections) {
    const cplx i(0.0, 1.0);
    struct End {
      Vec3 beta;
      Vec3 acc;
      double tau;
      double sign;
    };
    const End ends[2] = {
        {v.beta_last, v.acc_last, v.t.back() - dot(n, v.pos.back()), +1.0},
        {v.beta_first, v.acc_first, v.t.front() - dot(n, v.pos.front()), -1.0},
    };
    const double h2_12 = v.tau_scale_h * v.tau_scale_h / 12.0;
    for (const End& e : ends) {
      const double denom = 1.0 - dot(n, e.beta);
      const cplx step = std::polar(1.0, dom * e.tau);
      cplx phase = std::polar(1.0, omegas[0] * e.tau);
      for (std::size_t k = 0; k < nw; ++k, phase *= step) {
        const double omega = omegas[k];
        // Ballistic continuation beyond this end of the window.
        const cplx tail = e.sign * (i / omega) * phase / denom;
        // Trapezoid end correction, -h^2/12 [g'] with g = beta e^{i omega tau}.
        const cplx em = -e.sign * h2_12 * phase;
        const cplx cb = tail + em * (i * omega * denom);
        out[k].x += cb * e.beta.x + em * e.acc.x;
        out[k].y += cb * e.beta.y + em * e.acc.y;
        out[k].z += cb * e.beta.z + em * e.acc.z;
      }
    }
  }

  for (std::size_t k = 0; k < nw; ++k) {
    const cplx ndotb = n.x * out[k].x + n.y * out[k].y + n.z * out[k].z;
    out[k].x -= n.x * ndotb;
    out[k].y -= n.y * ndotb;
    out[k].z -= n.z * ndotb;
  }
}

void check_uniform(const std::vector<double>& om, double& om0, double& dom) {
  om0 = om.front();
  dom = om.size() > 1 ? (om.back() - om.front()) / static_cast<double>(om.size() - 1) : 0.0;
  for (std::size_t k = 0; k < om.size(); ++k) {
    if (std::abs(om[k] - (om0 + dom * static_cast<double>(k))) > 1e-9 * om.back()) {
      throw NumericError("frequency grid must be uniformly spaced");
    }
  }
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double half = 0.5 * (x[k + 1] - x[k]);
    w[k] += half;
    w[k + 1] += half;
  }
  return w;
}

}  // namespace

Vec3c farfield_amplitude(const Trajectory& traj, const Direction& direction, double omega,
                         Apodization apodization) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ConfigError("farfield_amplitude requires omega > 0");
  }
  RadiationOptions opts;
  opts.apodization = apodization;
  opts.samples_per_cycle = 0.0;  // keep every sample for single evaluations
  const View v = make_view(traj, opts);
  const Vec3 n = direction_to_unit_vector(direction);
  Scratch s;
  accumulate_direction(v, n, 1, omega, 0.0, s);
  std::vector<Vec3c> a;
  assemble_all(v, n, s, {omega}, 0.0, a);
  return a[0];
}

std::vector<Vec3c> amplitude_map(const Trajectory& traj, const AngularSpectralGrid& grid,
                                 const RadiationOptions& opts) {
  const View v = make_view(traj, opts);
  double om0 = 0.0, dom = 0.0;
  check_uniform(grid.omegas(), om0, dom);

  std::vector<Vec3c> out(grid.n_nodes());
  Scratch s;
  std::vector<Vec3c> amp;
  const std::size_t nw = grid.n_omega();
  for (std::size_t d = 0; d < grid.n_directions(); ++d) {
    const Vec3 n = direction_to_unit_vector(grid.direction(d / grid.n_phi(), d % grid.n_phi()));
    accumulate_direction(v, n, nw, om0, dom, s);
    assemble_all(v, n, s, grid.omegas(), dom, amp);
    for (std::size_t k = 0; k < nw; ++k) {
      if (!std::isfinite(norm2(amp[k]))) throw NumericError("non-finite far-field amplitude");
      out[d * nw + k] = amp[k];
    }
  }
  return out;
}

RadiationMap radiation_map(const Trajectory& traj, const AngularSpectralGrid& grid,
                           const UnitSystem& units, const RadiationOptions& opts) {
  const View v = make_view(traj, opts);
  double om0 = 0.0, dom = 0.0;
  check_uniform(grid.omegas(), om0, dom);

  RadiationMap map{grid, std::vector<double>(grid.n_nodes(), 0.0), units, 100.0};
  const double pref = constants::fine_structure_alpha / (4.0 * M_PI * M_PI) *
                      units.hbar_omega0_eV();
  const std::size_t nw = grid.n_omega();
  const std::size_t n_dir = grid.n_directions();

  auto run_range = [&](std::size_t d_begin, std::size_t d_end) {
    Scratch s;
    std::vector<Vec3c> amp;
    for (std::size_t d = d_begin; d < d_end; ++d) {
      const std::size_t i_theta = d / grid.n_phi();
      const std::size_t i_phi = d % grid.n_phi();
      const Vec3 n = direction_to_unit_vector(grid.direction(i_theta, i_phi));
      accumulate_direction(v, n, nw, om0, dom, s);
      assemble_all(v, n, s, grid.omegas(), dom, amp);
      double* out = &map.values[d * nw];
      for (std::size_t k = 0; k < nw; ++k) {
        const double omega = grid.omegas()[k];
        const double mag2 = std::norm(amp[k].x) + std::norm(amp[k].y) + std::norm(amp[k].z);
        out[k] = pref * omega * omega * mag2;
        if (!std::isfinite(out[k])) {
          throw NumericError("non-finite radiation map value");
        }
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, opts.n_threads);
  if (n_threads == 1 || n_dir < 2 * n_threads) {
    run_range(0, n_dir);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (n_dir + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(n_dir, b + chunk);
      if (b >= e) break;
      pool.emplace_back([&, b, e] {
        try {
          run_range(b, e);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return map;
}

double total_energy(const RadiationMap& map) {
  const auto& g = map.grid;
  double total = 0.0;
  for (std::size_t i = 0; i < g.n_theta(); ++i) {
    for (std::size_t j = 0; j < g.n_phi(); ++j) {
      const double dw = g.solid_angle_weight(i, j);
      const double* row = &map.values[(i * g.n_phi() + j) * g.n_omega()];
      double s = 0.0;
      for (std::size_t k = 0; k < g.n_omega(); ++k) s += row[k] * g.omega_weight(k);
      total += dw * s;
    }
  }
  return total;
}

double band_energy(const RadiationMap& map, double lambda_min_nm, double lambda_max_nm) {
  if (!(lambda_min_nm > 0.0) || !(lambda_max_nm > 0.0) || lambda_min_nm > lambda_max_nm) {
    throw ConfigError("band requires 0 < lambda_min_nm <= lambda_max_nm");
  }
  if (lambda_min_nm == lambda_max_nm) return 0.0;
  const auto& g = map.grid;
  const double lambda0 = map.units.wavelength_nm();
  const double w_lo = lambda0 / lambda_max_nm;
  const double w_hi = lambda0 / lambda_min_nm;
  const double eps = 1e-12 * g.omegas().back();
  if (w_lo < g.omegas().front() - eps || w_hi > g.omegas().back() + eps) {
    throw ConfigError("wavelength band extends outside the spectral grid");
  }

  double total = 0.0;
  for (std::size_t i = 0; i < g.n_theta(); ++i) {
    for (std::size_t j = 0; j < g.n_phi(); ++j) {
      const double dw = g.solid_angle_weight(i, j);
      const double* row = &map.values[(i * g.n_phi() + j) * g.n_omega()];
      double s = 0.0;
      for (std::size_t k = 0; k + 1 < g.n_omega(); ++k) {
        const double xa = g.omegas()[k], xb = g.omegas()[k + 1];
        const double a = std::max(xa, w_lo), b = std::min(xb, w_hi);
        if (b <= a) continue;
        const double va = row[k] + (row[k + 1] - row[k]) * (a - xa) / (xb - xa);
        const double vb = row[k] + (row[k + 1] - row[k]) * (b - xa) / (xb - xa);
        s += 0.5 * (b - a) * (va + vb);
      }
      total += dw * s;
    }
  }
  return total;
}

double larmor_total(const Trajectory& traj, const UnitSystem& units) {
  const std::size_t n = traj.size();
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma2 = 1.0 + norm2(traj.momenta()[i]);
    const Vec3& beta = traj.betas()[i];
    const Vec3& acc = traj.accelerations()[i];
    p[i] = gamma2 * gamma2 * gamma2 * (norm2(acc) - norm2(cross(beta, acc)));
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) integral += 0.5 * (p[i] + p[i + 1]);
  integral *= traj.dt();
  return (2.0 / 3.0) * constants::fine_structure_alpha * units.hbar_omega0_eV() * integral;
}

double photon_count_estimate(const RadiationMap& map, double collection_efficiency) {
  if (!(collection_efficiency >= 0.0)) throw ConfigError("collection efficiency must be >= 0");
  const auto& g = map.grid;
  double count = 0.0;
  for (std::size_t i = 0; i < g.n_theta(); ++i) {
    for (std::size_t j = 0; j < g.n_phi(); ++j) {
      const double dw = g.solid_angle_weight(i, j);
      const double* row = &map.values[(i * g.n_phi() + j) * g.n_omega()];
      double s = 0.0;
      for (std::size_t k = 0; k < g.n_omega(); ++k) {
        s += row[k] / map.units.photon_energy_eV(g.omegas()[k]) * g.omega_weight(k);
      }
      count += dw * s;
    }
  }
  return count * collection_efficiency;
}

double photon_count_estimate(const EmissionSpectrum& spectrum, double collection_efficiency) {
  if (!(collection_efficiency >= 0.0)) throw ConfigError("collection efficiency must be >= 0");
  const std::vector<double> w = trapezoid_weights(spectrum.omegas);
  double count = 0.0;
  for (std::size_t k = 0; k < spectrum.omegas.size(); ++k) {
    count += spectrum.values[k] / spectrum.units.photon_energy_eV(spectrum.omegas[k]) * w[k];
  }
  return count * collection_efficiency;
}

EmissionSpectrum spectrum_at(const RadiationMap& map, std::size_t i_theta, std::size_t i_phi) {
  const auto& g = map.grid;
  EmissionSpectrum sp{g.omegas(), {}, map.units, false, {}, 0};
  const double* row = &map.values[(i_theta * g.n_phi() + i_phi) * g.n_omega()];
  sp.values.assign(row, row + g.n_omega());
  return sp;
}

EmissionSpectrum integrated_spectrum(const RadiationMap& map) {
  const auto& g = map.grid;
  EmissionSpectrum sp{g.omegas(), std::vector<double>(g.n_omega(), 0.0), map.units, true, {}, 0};
  for (std::size_t i = 0; i < g.n_theta(); ++i) {
    for (std::size_t j = 0; j < g.n_phi(); ++j) {
      const double dw = g.solid_angle_weight(i, j);
      const double* row = &map.values[(i * g.n_phi() + j) * g.n_omega()];
      for (std::size_t k = 0; k < g.n_omega(); ++k) sp.values[k] += dw * row[k];
    }
  }
  return sp;
}

}  // namespace escat
