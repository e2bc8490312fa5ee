#include "escat/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "escat/constants.hpp"
#include "escat/errors.hpp"
#include "escat/grid.hpp"

namespace escat {

namespace {

using cplx = std::complex<double>;

constexpr double kHbar = constants::compton_reduced_m;  // m * (m_e c)
constexpr double kWindow = 12.0;   // quadrature windows, units of the local width
constexpr double kCoverage = 0.99;
constexpr std::size_t kGlN = 128;

struct Quad {
  std::vector<double> nodes, weights;
  Quad() { gauss_legendre(kGlN, nodes, weights); }
};

const Quad& quad() {
  static const Quad q;
  return q;
}

void set_component(Vec3& v, int i, double value) {
  (i == 0 ? v.x : (i == 1 ? v.y : v.z)) = value;
}

// Per-axis geometry of one (i, j) pair of packet components.
struct AxisPair {
  double sigma;
  double xbar, pbar;  // midpoints
  double dx, dp;      // component i minus component j
};

AxisPair make_axis_pair(const Vec3& ri, const Vec3& pi, const Vec3& rj, const Vec3& pj,
                        const Vec3& sigma, int ax) {
  AxisPair g;
  g.sigma = component(sigma, ax);
  g.xbar = 0.5 * (component(ri, ax) + component(rj, ax));
  g.pbar = 0.5 * (component(pi, ax) + component(pj, ax));
  g.dx = component(ri, ax) - component(rj, ax);
  g.dp = component(pi, ax) - component(pj, ax);
  return g;
}

// Closed-form per-axis Wigner factor of a pair, ballistic shear folded in.
cplx axis_density(const AxisPair& g, double x, double p, double ct) {
  const double u = x - ct * p - g.xbar;
  const double q = p - g.pbar;
  const double s2 = g.sigma * g.sigma;
  const double mag = std::exp(-u * u / (2.0 * s2) - 2.0 * s2 * q * q / (kHbar * kHbar));
  return std::polar(mag / (M_PI * kHbar), (g.dp * u - p * g.dx) / kHbar);
}

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool empty() const { return !(hi > lo); }
};

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Gauss-Legendre with the panel count chosen from the total phase swing, so
// oscillatory cross terms stay resolved.
template <class F>
cplx integrate_panels(double a, double b, double phase_rate, F&& f) {
  if (!(b > a)) return {0.0, 0.0};
  const double swing = std::abs(phase_rate) * (b - a);
  const std::size_t panels = 1 + static_cast<std::size_t>(swing / 100.0);
  if (panels > 4096) {
    throw NumericError("phase-space quadrature became too oscillatory for this state");
  }
  const Quad& q = quad();
  const double width = (b - a) / static_cast<double>(panels);
  cplx acc{0.0, 0.0};
  for (std::size_t s = 0; s < panels; ++s) {
    const double mid = a + width * (static_cast<double>(s) + 0.5);
    const double half = 0.5 * width;
    for (std::size_t k = 0; k < kGlN; ++k) {
      acc += (half * q.weights[k]) * f(mid + half * q.nodes[k]);
    }
  }
  return acc;
}

void require_ordered(const PhaseSpaceBox& box) {
  for (int ax = 0; ax < 3; ++ax) {
    if (!(component(box.r_min, ax) < component(box.r_max, ax)) ||
        !(component(box.p_min, ax) < component(box.p_max, ax))) {
      throw ConfigError("phase-space box must have min < max on every axis");
    }
  }
}

}  // namespace

void GaussianWavePacket::validate() const {
  for (int ax = 0; ax < 3; ++ax) {
    const double s = component(sigma_r, ax);
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sigma_r must be positive per axis");
    if (!std::isfinite(component(center_r, ax)) || !std::isfinite(component(center_p, ax))) {
      throw ConfigError("wave-packet centers must be finite");
    }
  }
}

void MomentumSuperposition::validate() const {
  if (components.size() < 2) {
    throw ConfigError("a momentum superposition needs at least two components");
  }
  const Vec3& s0 = components.front().packet.sigma_r;
  for (const WeightedPacket& w : components) {
    w.packet.validate();
    if (!std::isfinite(w.amplitude.real()) || !std::isfinite(w.amplitude.imag())) {
      throw ConfigError("superposition amplitudes must be finite");
    }
    if (w.packet.sigma_r.x != s0.x || w.packet.sigma_r.y != s0.y || w.packet.sigma_r.z != s0.z) {
      throw ConfigError("superposition components must share sigma_r");
    }
  }
}

WignerState::WignerState(const GaussianWavePacket& packet) {
  packet.validate();
  amps_ = {cplx{1.0, 0.0}};
  centers_r_ = {packet.center_r};
  centers_p_ = {packet.center_p};
  sigma_ = packet.sigma_r;
  normalize();
}

WignerState::WignerState(const MomentumSuperposition& superposition) {
  superposition.validate();
  for (const WeightedPacket& w : superposition.components) {
    amps_.push_back(w.amplitude);
    centers_r_.push_back(w.packet.center_r);
    centers_p_.push_back(w.packet.center_p);
  }
  sigma_ = superposition.components.front().packet.sigma_r;
  normalize();
}

void WignerState::normalize() {
  const std::size_t n = amps_.size();
  cplx norm2{0.0, 0.0};
  double sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum2 += std::norm(amps_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      cplx overlap{1.0, 0.0};
      for (int ax = 0; ax < 3; ++ax) {
        const AxisPair g =
            make_axis_pair(centers_r_[i], centers_p_[i], centers_r_[j], centers_p_[j], sigma_, ax);
        const double s2 = g.sigma * g.sigma;
        const double mag =
            std::exp(-g.dx * g.dx / (8.0 * s2) - s2 * g.dp * g.dp / (2.0 * kHbar * kHbar));
        overlap *= std::polar(mag, -g.pbar * g.dx / kHbar);
      }
      norm2 += amps_[i] * std::conj(amps_[j]) * overlap;
    }
  }
  if (!(sum2 > 0.0) || !(norm2.real() > 1e-12 * sum2)) {
    throw ConfigError("superposition amplitudes cancel; the state has no norm");
  }
  const double scale = 1.0 / std::sqrt(norm2.real());
  for (cplx& a : amps_) a *= scale;
}

double WignerState::operator()(const Vec3& r, const Vec3& p) const {
  const std::size_t n = amps_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx term = amps_[i] * std::conj(amps_[j]);
      for (int ax = 0; ax < 3; ++ax) {
        const AxisPair g =
            make_axis_pair(centers_r_[i], centers_p_[i], centers_r_[j], centers_p_[j], sigma_, ax);
        term *= axis_density(g, component(r, ax), component(p, ax), ct_m_);
      }
      total += term.real();
    }
  }
  return total;
}

Vec3 WignerState::sigma_p() const {
  return {kHbar / (2.0 * sigma_.x), kHbar / (2.0 * sigma_.y), kHbar / (2.0 * sigma_.z)};
}

double WignerState::time_s() const { return ct_m_ / constants::c_m_per_s; }

Vec3 WignerState::evolved_sigma_r() const {
  const double t = time_s();
  return {evolved_sigma(sigma_.x, t), evolved_sigma(sigma_.y, t), evolved_sigma(sigma_.z, t)};
}

PhaseSpaceBox WignerState::support_box(double n_widths) const {
  if (!(n_widths > 0.0)) throw ConfigError("support box needs a positive width multiple");
  PhaseSpaceBox box;
  const Vec3 se = evolved_sigma_r();
  const Vec3 sp = sigma_p();
  for (int ax = 0; ax < 3; ++ax) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double p_lo = x_lo, p_hi = -x_lo;
    for (std::size_t j = 0; j < amps_.size(); ++j) {
      const double xc = component(centers_r_[j], ax) + ct_m_ * component(centers_p_[j], ax);
      const double pc = component(centers_p_[j], ax);
      x_lo = std::min(x_lo, xc);
      x_hi = std::max(x_hi, xc);
      p_lo = std::min(p_lo, pc);
      p_hi = std::max(p_hi, pc);
    }
    set_component(box.r_min, ax, x_lo - n_widths * component(se, ax));
    set_component(box.r_max, ax, x_hi + n_widths * component(se, ax));
    set_component(box.p_min, ax, p_lo - n_widths * component(sp, ax));
    set_component(box.p_max, ax, p_hi + n_widths * component(sp, ax));
  }
  return box;
}

double wigner_eval(const WignerState& state, const Vec3& r, const Vec3& p) {
  return state(r, p);
}

WignerState free_evolve(const WignerState& state, double t_s) {
  if (!(t_s >= 0.0)) throw ConfigError("free evolution time must be >= 0");
  WignerState out = state;
  out.ct_m_ += constants::c_m_per_s * t_s;
  return out;
}

double evolved_sigma(double sigma0_m, double t_s) {
  if (!(sigma0_m > 0.0)) throw ConfigError("sigma_r must be positive per axis");
  const double xi = kHbar * constants::c_m_per_s * t_s / (2.0 * sigma0_m * sigma0_m);
  return sigma0_m * std::sqrt(1.0 + xi * xi);
}

double marginal_position(const WignerState& state, const Vec3& r) {
  const double ct = state.ct_m_;
  const std::size_t n = state.amps_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx term = state.amps_[i] * std::conj(state.amps_[j]);
      for (int ax = 0; ax < 3 && term != cplx{0.0, 0.0}; ++ax) {
        const AxisPair g = make_axis_pair(state.centers_r_[i], state.centers_p_[i],
                                          state.centers_r_[j], state.centers_p_[j],
                                          state.sigma_, ax);
        const double x = component(r, ax);
        const double sp = kHbar / (2.0 * g.sigma);
        Interval win{g.pbar - kWindow * sp, g.pbar + kWindow * sp};
        if (ct > 0.0) {
          // keep the sheared position Gaussian alive as well
          win = intersect(win, {(x - g.xbar - kWindow * g.sigma) / ct,
                                (x - g.xbar + kWindow * g.sigma) / ct});
        }
        if (win.empty()) {
          term = cplx{0.0, 0.0};
          break;
        }
        const double rate = (std::abs(g.dx) + ct * std::abs(g.dp)) / kHbar;
        term *= integrate_panels(win.lo, win.hi, rate,
                                 [&](double p) { return axis_density(g, x, p, ct); });
      }
      total += term.real();
    }
  }
  return total;
}

double marginal_momentum(const WignerState& state, const Vec3& p) {
  const double ct = state.ct_m_;
  const std::size_t n = state.amps_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx term = state.amps_[i] * std::conj(state.amps_[j]);
      for (int ax = 0; ax < 3; ++ax) {
        const AxisPair g = make_axis_pair(state.centers_r_[i], state.centers_p_[i],
                                          state.centers_r_[j], state.centers_p_[j],
                                          state.sigma_, ax);
        const double pv = component(p, ax);
        const double xc = g.xbar + ct * pv;
        term *= integrate_panels(xc - kWindow * g.sigma, xc + kWindow * g.sigma,
                                 std::abs(g.dp) / kHbar,
                                 [&](double x) { return axis_density(g, x, pv, ct); });
      }
      total += term.real();
    }
  }
  return total;
}

double mass_in_box(const WignerState& state, const PhaseSpaceBox& box) {
  require_ordered(box);
  const double ct = state.ct_m_;
  const std::size_t n = state.amps_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx term = state.amps_[i] * std::conj(state.amps_[j]);
      for (int ax = 0; ax < 3 && term != cplx{0.0, 0.0}; ++ax) {
        const AxisPair g = make_axis_pair(state.centers_r_[i], state.centers_p_[i],
                                          state.centers_r_[j], state.centers_p_[j],
                                          state.sigma_, ax);
        const double sp = kHbar / (2.0 * g.sigma);
        const Interval pw = intersect({component(box.p_min, ax), component(box.p_max, ax)},
                                      {g.pbar - kWindow * sp, g.pbar + kWindow * sp});
        if (pw.empty()) {
          term = cplx{0.0, 0.0};
          break;
        }
        const Interval bx{component(box.r_min, ax), component(box.r_max, ax)};
        const double outer_rate = (std::abs(g.dx) + ct * std::abs(g.dp)) / kHbar;
        const double inner_rate = std::abs(g.dp) / kHbar;
        term *= integrate_panels(pw.lo, pw.hi, outer_rate, [&](double p) {
          const double xc = g.xbar + ct * p;
          const Interval xw = intersect(bx, {xc - kWindow * g.sigma, xc + kWindow * g.sigma});
          if (xw.empty()) return cplx{0.0, 0.0};
          return integrate_panels(xw.lo, xw.hi, inner_rate,
                                  [&](double x) { return axis_density(g, x, p, ct); });
        });
      }
      total += term.real();
    }
  }
  return total;
}

NegativityReport negativity_report(const WignerState& state, const PhaseSpaceBox& box,
                                   std::size_t resolution) {
  if (resolution < 2) throw ConfigError("negativity scan needs resolution >= 2");
  require_ordered(box);

  // The scan plane follows the one axis the components are displaced along.
  const std::size_t n = state.amps_.size();
  int axis = 0;
  int active = 0;
  const Vec3 sp = state.sigma_p();
  for (int ax = 0; ax < 3; ++ax) {
    double span_r = 0.0, span_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        span_r = std::max(span_r, std::abs(component(state.centers_r_[i], ax) -
                                           component(state.centers_r_[j], ax)));
        span_p = std::max(span_p, std::abs(component(state.centers_p_[i], ax) -
                                           component(state.centers_p_[j], ax)));
      }
    }
    if (span_r > 1e-9 * component(state.sigma_, ax) || span_p > 1e-9 * component(sp, ax)) {
      ++active;
      axis = ax;
    }
  }
  if (active > 1) {
    throw ConfigError("superposition components span more than one axis; "
                      "the negativity scan needs a single displacement axis");
  }

  const double mass = mass_in_box(state, box);
  if (mass < kCoverage) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "phase-space box covers only %.4f of the state; enlarge it", mass);
    throw ConfigError(msg);
  }

  // Transverse coordinates pinned at the (shared) transported centers.
  Vec3 r_pin = state.centers_r_.front() + state.ct_m_ * state.centers_p_.front();
  Vec3 p_pin = state.centers_p_.front();

  const double x_lo = component(box.r_min, axis);
  const double p_lo = component(box.p_min, axis);
  const double dx_cell = (component(box.r_max, axis) - x_lo) / static_cast<double>(resolution);
  const double dp_cell = (component(box.p_max, axis) - p_lo) / static_cast<double>(resolution);

  NegativityReport report;
  report.mass_in_box = mass;
  report.min_value = std::numeric_limits<double>::infinity();
  std::size_t negative = 0;
  for (std::size_t a = 0; a < resolution; ++a) {
    Vec3 r = r_pin;
    set_component(r, axis, x_lo + dx_cell * (static_cast<double>(a) + 0.5));
    for (std::size_t b = 0; b < resolution; ++b) {
      Vec3 p = p_pin;
      set_component(p, axis, p_lo + dp_cell * (static_cast<double>(b) + 0.5));
      const double value = state(r, p);
      report.min_value = std::min(report.min_value, value);
      if (value < 0.0) ++negative;
    }
  }
  report.negative_fraction =
      static_cast<double>(negative) / static_cast<double>(resolution * resolution);
  return report;
}

}  // namespace escat
