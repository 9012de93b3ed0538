#include "pwave/pulse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "pwave/constants.hpp"
#include "pwave/errors.hpp"
#include "pwave/numerics.hpp"

namespace pwave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double gaussian_value(const GaussianEnvelope& g, double xi) {
  if (xi < 0.0 || xi > g.length) return 0.0;
  const double d = xi - g.center;
  return g.amplitude * std::exp(-d * d / (2.0 * g.variance));
}

double gaussian_slope(const GaussianEnvelope& g, double xi) {
  if (xi < 0.0 || xi > g.length) return 0.0;
  return -(xi - g.center) / g.variance * gaussian_value(g, xi);
}

double polynomial_value(const PolynomialEnvelope& p, double xi) {
  const double t = (xi - p.center) / p.width;
  const double b = 0.25 - t * t;
  return b < 0.0 ? 0.0 : p.amplitude * b * b;
}

double polynomial_slope(const PolynomialEnvelope& p, double xi) {
  const double t = (xi - p.center) / p.width;
  const double b = 0.25 - t * t;
  return b < 0.0 ? 0.0 : p.amplitude * 2.0 * b * (-2.0 * t / p.width);
}

}  // namespace

double polarization_factor(Polarization pol) {
  return pol == Polarization::circular ? 1.0 : 0.5;
}

double polarization_factor(const PulseSpec& pulse) {
  return polarization_factor(pulse.polarization);
}

// ---------------------------------------------------------------- SampledEnvelope

SampledEnvelope::SampledEnvelope(std::vector<double> xi, std::vector<double> w)
    : xi_(std::move(xi)), w_(std::move(w)) {
  if (xi_.size() != w_.size()) throw InvalidArgument("SampledEnvelope: column length mismatch");
  if (xi_.size() < 2) throw InvalidArgument("SampledEnvelope: need at least 2 samples");
  for (std::size_t i = 0; i < xi_.size(); ++i) {
    if (!std::isfinite(xi_[i]) || !std::isfinite(w_[i])) {
      throw InvalidArgument("SampledEnvelope: non-finite sample");
    }
    if (w_[i] < 0.0) throw InvalidArgument("SampledEnvelope: negative envelope value");
    if (i > 0 && !(xi_[i] > xi_[i - 1])) {
      throw InvalidArgument("SampledEnvelope: xi not strictly increasing");
    }
  }
}

SampledEnvelope SampledEnvelope::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("envelope CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "xi_cm,w") throw InvalidArgument("envelope CSV: expected header 'xi_cm,w', got '" + line + "'");
  std::vector<double> xi, w;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("envelope CSV: missing comma on line " + std::to_string(lineno));
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      xi.push_back(std::stod(a, &used));
      if (used != a.size()) throw std::invalid_argument("trailing");
      w.push_back(std::stod(b, &used));
      if (used != b.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidArgument("envelope CSV: bad number on line " + std::to_string(lineno));
    }
  }
  return SampledEnvelope(std::move(xi), std::move(w));
}

SampledEnvelope SampledEnvelope::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("envelope CSV: cannot open " + path.string());
  return read_csv(in);
}

double SampledEnvelope::operator()(double xi) const {
  if (xi < xi_.front() || xi > xi_.back()) return 0.0;
  auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  std::size_t k = std::min(static_cast<std::size_t>(it - xi_.begin()), xi_.size() - 1);
  if (k == 0) return w_[0];
  const double t = (xi - xi_[k - 1]) / (xi_[k] - xi_[k - 1]);
  return w_[k - 1] + t * (w_[k] - w_[k - 1]);
}

double SampledEnvelope::slope(double xi) const {
  if (xi < xi_.front() || xi >= xi_.back()) return 0.0;
  auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  const std::size_t k = static_cast<std::size_t>(it - xi_.begin());
  return (w_[k] - w_[k - 1]) / (xi_[k] - xi_[k - 1]);
}

// ---------------------------------------------------------------- PulseSpec

void validate(const PulseSpec& pulse) {
  if (!(pulse.wavelength > 0.0) || !std::isfinite(pulse.wavelength)) {
    throw InvalidArgument("pulse: wavelength must be positive");
  }
  std::visit(overloaded{
                 [](const GaussianEnvelope& g) {
                   if (!(g.amplitude > 0.0)) throw InvalidArgument("pulse: a_g must be positive");
                   if (!(g.variance > 0.0)) throw InvalidArgument("pulse: sigma must be positive");
                   if (!(g.length > 0.0)) throw InvalidArgument("pulse: length l must be positive");
                   if (g.center < 0.0 || g.center > g.length) {
                     throw InvalidArgument("pulse: gaussian center outside [0, l]");
                   }
                 },
                 [](const PolynomialEnvelope& p) {
                   if (!(p.amplitude > 0.0)) throw InvalidArgument("pulse: a_p must be positive");
                   if (!(p.width > 0.0)) throw InvalidArgument("pulse: l_p must be positive");
                   if (p.center - 0.5 * p.width < 0.0) {
                     throw InvalidArgument("pulse: polynomial support starts before xi = 0");
                   }
                 },
                 [](const SampledEnvelope& s) {
                   if (s.xi().front() < 0.0 && s.w().front() > 0.0) {
                     // w must vanish for xi <= 0; samples at negative xi are
                     // ignored by envelope(), but a nonzero value there is a
                     // malformed profile.
                     throw InvalidArgument("pulse: sampled envelope nonzero at negative xi");
                   }
                 },
             },
             pulse.envelope);
}

std::vector<std::string> pulse_warnings(const PulseSpec& pulse) {
  std::vector<std::string> out;
  const double length = support_end(pulse) - support_begin(pulse);
  if (pulse.wavelength > length / 10.0) {
    out.push_back("wavelength exceeds a tenth of the pulse length; the slowly-varying envelope picture is poor");
  }
  if (const auto* g = std::get_if<GaussianEnvelope>(&pulse.envelope)) {
    if (g->length < 3.0 * std::sqrt(g->variance)) {
      out.push_back("gaussian support l < 3 sqrt(sigma); truncation is not negligible");
    }
  }
  return out;
}

double wavenumber(const PulseSpec& pulse) { return 2.0 * cgs::pi / pulse.wavelength; }

double support_begin(const PulseSpec& pulse) {
  return std::visit(
      overloaded{
          [](const GaussianEnvelope&) { return 0.0; },
          [](const PolynomialEnvelope& p) { return p.center - 0.5 * p.width; },
          [](const SampledEnvelope& s) { return std::max(0.0, s.xi().front()); },
      },
      pulse.envelope);
}

double support_end(const PulseSpec& pulse) {
  return std::visit(overloaded{
                        [](const GaussianEnvelope& g) { return g.length; },
                        [](const PolynomialEnvelope& p) { return p.center + 0.5 * p.width; },
                        [](const SampledEnvelope& s) { return std::max(0.0, s.xi().back()); },
                    },
                    pulse.envelope);
}

std::vector<double> breakpoints(const PulseSpec& pulse) {
  std::vector<double> b{0.0, support_begin(pulse), support_end(pulse)};
  if (const auto* s = std::get_if<SampledEnvelope>(&pulse.envelope)) {
    b.insert(b.end(), s->xi().begin(), s->xi().end());
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double peak_position(const PulseSpec& pulse) {
  return std::visit(overloaded{
                        [](const GaussianEnvelope& g) { return g.center; },
                        [](const PolynomialEnvelope& p) { return p.center; },
                        [](const SampledEnvelope& s) {
                          const auto& w = s.w();
                          std::size_t best = 0;
                          for (std::size_t i = 1; i < w.size(); ++i) {
                            if (w[i] > w[best]) best = i;
                          }
                          return s.xi()[best];
                        },
                    },
                    pulse.envelope);
}

double envelope(const PulseSpec& pulse, double xi) {
  if (xi < 0.0) return 0.0;
  return std::visit(overloaded{
                        [xi](const GaussianEnvelope& g) { return gaussian_value(g, xi); },
                        [xi](const PolynomialEnvelope& p) { return polynomial_value(p, xi); },
                        [xi](const SampledEnvelope& s) { return s(xi); },
                    },
                    pulse.envelope);
}

double envelope_slope(const PulseSpec& pulse, double xi) {
  if (xi < 0.0) return 0.0;
  return std::visit(overloaded{
                        [xi](const GaussianEnvelope& g) { return gaussian_slope(g, xi); },
                        [xi](const PolynomialEnvelope& p) { return polynomial_slope(p, xi); },
                        [xi](const SampledEnvelope& s) { return s.slope(xi); },
                    },
                    pulse.envelope);
}

Vec2 phase_vector(const PulseSpec& pulse, double xi) {
  const double phase = wavenumber(pulse) * xi;
  if (pulse.polarization == Polarization::linear) return {std::sin(phase), 0.0};
  return {std::sin(phase), -std::cos(phase)};
}

Vec2 carrier_vector(const PulseSpec& pulse, double xi) {
  const double phase = wavenumber(pulse) * xi;
  if (pulse.polarization == Polarization::linear) return {std::cos(phase), 0.0};
  return {std::cos(phase), std::sin(phase)};
}

Vec2 transverse_momentum_zero(const PulseSpec& pulse, double xi) {
  const double w = envelope(pulse, xi);
  if (w == 0.0) return {};
  if (pulse.mode == PulseMode::averaged) return {std::sqrt(polarization_factor(pulse)) * w, 0.0};
  return w * phase_vector(pulse, xi);
}

double longitudinal_momentum_zero(const PulseSpec& pulse, double xi) {
  const double w = envelope(pulse, xi);
  if (w == 0.0) return 0.0;
  if (pulse.mode == PulseMode::averaged) return 0.5 * polarization_factor(pulse) * w * w;
  return 0.5 * transverse_momentum_zero(pulse, xi).norm2();
}

double lorentz_factor_zero(const PulseSpec& pulse, double xi) {
  return 1.0 + longitudinal_momentum_zero(pulse, xi);
}

ClosedPrimitives polynomial_primitives_closed(const PulseSpec& pulse, double xi) {
  const auto* poly = std::get_if<PolynomialEnvelope>(&pulse.envelope);
  if (poly == nullptr) throw InvalidArgument("polynomial_primitives_closed: envelope is not polynomial");
  if (pulse.mode != PulseMode::averaged) {
    throw InvalidArgument("polynomial_primitives_closed: needs envelope-averaged mode");
  }
  const double p = polarization_factor(pulse);
  const double lp = poly->width;
  const double a2 = poly->amplitude * poly->amplitude;
  // Shifted, normalized coordinate y in [0, 1] over the support.
  auto y_poly = [](double y) {
    const double y5 = std::pow(y, 5);
    return y5 * (1.0 / 5 + y * (-2.0 / 3 + y * (6.0 / 7 + y * (-1.0 / 2 + y * (1.0 / 9)))));
  };
  auto v_poly = [](double y) {
    const double y6 = std::pow(y, 6);
    return y6 * (1.0 / 30 + y * (-2.0 / 21 + y * (3.0 / 28 + y * (-1.0 / 18 + y * (1.0 / 90)))));
  };
  const double begin = poly->center - 0.5 * lp;
  const double y = (xi - begin) / lp;
  if (y <= 0.0) return {};
  const double y_scale = 0.5 * p * lp * a2;
  const double v_scale = 0.5 * p * lp * lp * a2;
  if (y <= 1.0) return {y_scale * y_poly(y), v_scale * v_poly(y)};
  const double y_full = y_scale * y_poly(1.0);
  return {y_full, v_scale * v_poly(1.0) + y_full * (xi - (begin + lp))};
}

double intensity_fwhm(const PulseSpec& pulse) {
  const double peak = peak_position(pulse);
  const double w_peak = envelope(pulse, peak);
  const double half = 0.5 * w_peak * w_peak;
  auto f = [&](double xi) {
    const double w = envelope(pulse, xi);
    return w * w - half;
  };
  const double lo = find_root_monotone(f, support_begin(pulse), peak, 1e-15);
  const double hi = find_root_monotone([&](double xi) { return -f(xi); }, peak, support_end(pulse),
                                       1e-15);
  return hi - lo;
}

double envelope_square_integral(const PulseSpec& pulse) {
  const double a = support_begin(pulse);
  const double b = support_end(pulse);
  constexpr int panels = 4000;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    sum += gauss_legendre5(
        [&](double xi) {
          const double w = envelope(pulse, xi);
          return w * w;
        },
        a + i * h, a + (i + 1) * h);
  }
  return sum;
}

}  // namespace pwave
