#include "ridgerec/profile.hpp"

#include "ridgerec/errors.hpp"

#include <cmath>
#include <numbers>

namespace ridgerec {

namespace {

double sech2(double t) {
  const double c = std::cosh(t);
  return 1.0 / (c * c);
}

// max |d^2/dt^2 tanh| = 4 / (3 sqrt 3), attained at tanh(t)^2 = 1/3.
const double kTanhCurvature = 4.0 / (3.0 * std::sqrt(3.0));

}  // namespace

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names{"linear", "tanh", "tanh-shift", "recip"};
  return names;
}

Profile make_profile(std::string_view name, const ProfileParams& params) {
  Profile p;
  p.name = std::string(name);
  if (name == "linear") {
    p.eval = [](double t) { return t; };
    p.deriv = [](double) { return 1.0; };
    p.c0 = 1.0;
    p.c1 = 0.0;
    p.domain_lo = -1.0;
    p.domain_hi = 4.0;
  } else if (name == "tanh") {
    p.eval = [](double t) { return std::tanh(t); };
    p.deriv = sech2;
    p.c0 = 1.0;
    p.c1 = kTanhCurvature;
  } else if (name == "tanh-shift") {
    p.eval = [](double t) { return std::tanh(t - 1.0); };
    p.deriv = [](double t) { return sech2(t - 1.0); };
    p.c0 = 1.0;
    p.c1 = kTanhCurvature;
  } else if (name == "recip") {
    const double r = params.local_radius;
    if (!(r >= 0.0 && r < 1.0)) throw InputError("recip: local radius must lie in [0, 1)");
    p.eval = [](double t) { return -1.0 / t; };
    p.deriv = [](double t) { return 1.0 / (t * t); };
    // g' = 1/t^2 and g'' = -2/t^3 are monotone in |.| on (0, inf), so the
    // local constants sit at the endpoint nearest the pole.
    const double lo = 1.0 - r;
    p.c0 = 1.0 / (lo * lo);
    p.c1 = 2.0 / (lo * lo * lo);
    p.anchor = 1.0;
    p.domain_lo = lo;
    p.domain_hi = 1.0 + r;
  } else {
    throw InputError("unknown profile '" + std::string(name) + "'");
  }
  if (params.anchor) p.anchor = *params.anchor;
  p.anchor_slope = p.deriv(p.anchor);
  return p;
}

Profile rescaled(const Profile& g, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("rescaled: lambda must be positive");
  Profile out = g;
  out.name = g.name + "/scaled";
  out.eval = [f = g.eval, lambda](double t) { return f(t / lambda); };
  out.deriv = [f = g.deriv, lambda](double t) { return f(t / lambda) / lambda; };
  out.c0 = g.c0 / lambda;
  out.c1 = g.c1 / (lambda * lambda);
  out.anchor = g.anchor * lambda;
  out.anchor_slope = g.anchor_slope / lambda;
  out.domain_lo = g.domain_lo * lambda;
  out.domain_hi = g.domain_hi * lambda;
  return out;
}

double radial_local_radius(double h) { return h + h * h / 4.0; }

}  // namespace ridgerec
