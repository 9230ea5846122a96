#pragma once

#include <stdexcept>
#include <string>

namespace cuffdim {

/// Thrown for violated preconditions and failed numerical constructions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every numeric threshold used by the library lives here so that a precision
/// study only has to touch one record.
struct Tolerances {
  double determinant = 1e-12;       // |u|^2 - |v|^2 = 1 after renormalization
  double boundary = 1e-12;          // ||image| - 1| for circle points
  double disk_margin = 1e-12;       // DiskPoint requires |z| < 1 - disk_margin
  double endpoint_separation = 1e-12;
  double orthogonality = 1e-10;     // geodesic arcs meet the unit circle at pi/2
  double on_geodesic = 1e-12;       // signed_side returns 0 inside this band
  double parabolic_trace = 1e-9;    // ||tr| - 2| below this is parabolic
  double identity = 1e-12;
  double right_angle = 1e-8;
  double side_length = 1e-8;
  double cuff_recovery = 1e-8;
  double gluing = 1e-9;
  double segment_membership = 1e-9;  // hyperbolic slack for point-on-segment
  double vertex_tie = 1e-9;          // ray-parameter ties at octagon vertices
  double power_iteration = 1e-12;
  int power_iteration_max_steps = 100000;
};

inline const Tolerances& tolerances() {
  static const Tolerances defaults{};
  return defaults;
}

}  // namespace cuffdim
