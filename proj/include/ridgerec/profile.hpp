#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ridgerec {

/// Univariate profile g with its derivative and the Lipschitz constants the
/// recovery bounds are stated in.
struct Profile {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  double c0 = 0.0;  // Lipschitz constant of g on [domain_lo, domain_hi]
  double c1 = 0.0;  // Lipschitz constant of g' on the same interval
  double anchor = 0.0;        // 0 for ridge models, 1 for translated radial ones
  double anchor_slope = 0.0;  // g'(anchor)
  double domain_lo = -1.0;
  double domain_hi = 1.0;

  double operator()(double t) const { return eval(t); }
};

struct ProfileParams {
  /// recip only: half-width r of the interval [1 - r, 1 + r] on which the
  /// local constants are computed; must satisfy 0 <= r < 1.
  double local_radius = 0.0;
  /// Overrides the default anchor point (0, or 1 for recip).
  std::optional<double> anchor;
};

/// Built-ins: "linear" g(t)=t, "tanh", "tanh-shift" g(t)=tanh(t-1),
/// "recip" g(t)=-1/t. Throws InputError on an unknown name.
Profile make_profile(std::string_view name, const ProfileParams& params = {});

/// Names accepted by make_profile.
const std::vector<std::string>& profile_names();

/// g(. / lambda): pairs with a direction scaled by lambda to give the same
/// ridge function.
Profile rescaled(const Profile& g, double lambda);

/// Local radius the recip constants must cover for Algorithm D with step h.
double radial_local_radius(double h);

}  // namespace ridgerec
