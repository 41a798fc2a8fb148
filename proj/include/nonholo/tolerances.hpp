#pragma once

#include <string>

namespace nonholo {

// Central numeric thresholds. Selected by name through the
// NONHOLO_TOLERANCE_PROFILE environment variable ("default", "strict", "loose").
struct Tolerances {
  std::string profile = "default";
  double degenerate_triad_floor = 1e-12;  // |det e| (or sqrt det g) below this is rejected
  double defect_core_radius = 1e-8;       // excluded disk around defect lines
  double endpoint_tolerance = 1e-12;      // |dq(t_a)|, |dq(t_b)| for variations
  double max_hop_ratio = 1.0;             // nearest-neighbour hop / Gaussian width
  double kernel_cutoff_widths = 6.0;      // kernel rows truncated beyond this many widths
  double quadrature_guard_factor = 4.0;   // loop samples closer than factor*core radius diverge

  static Tolerances from_profile(const std::string& name);
};

// Profile named by NONHOLO_TOLERANCE_PROFILE, or the default profile.
const Tolerances& default_tolerances();

}  // namespace nonholo
