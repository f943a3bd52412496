#pragma once

#include <cstdint>
#include <string>

#include "stabcert/grid.hpp"

namespace stabcert {

enum class SampleFamily { Bumps, RandomPiecewise, BoundaryConcentrated, SmoothModes, Mixed };

// Boundary behavior requested of the generated states.
enum class SampleBC {
  None,       // no constraint
  LeftZero,   // vanish at x = x_min (right-shift domain)
  RightZero,  // vanish at x = x_max (left-shift domain)
  Neumann,    // flat at both ends (heat domain)
};

// Deterministic seeded sample generator: identical spec -> identical set,
// independent of evaluation order (per-index engines).
struct SampleSpec {
  int count = 100;
  std::uint64_t seed = 1;
  SampleFamily family = SampleFamily::Mixed;
};

SampleFamily sample_family_from_string(const std::string& s);
std::string to_string(SampleFamily f);

// Samples are supported in [x_min, x_min + support_max] (pass grid.length()
// for no restriction); every sample is nonzero.
std::vector<GridFunction> make_samples(const SampleSpec& spec, const Grid& grid, NormTag tag,
                                       SampleBC bc, double support_max);

// Scalar time profiles g(s) on [0,T] for control-admissibility inputs,
// sampled at the n_t left endpoints.
std::vector<std::vector<double>> make_time_profiles(const SampleSpec& spec, int n_t, double T);

}  // namespace stabcert
