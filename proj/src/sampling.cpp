#include "stabcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stabcert {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Small deterministic stream; not std::uniform_real_distribution so that
// sequences are identical across standard libraries.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  double next() {
    s = splitmix64(s ^ 0xd1b54a32d192ed03ULL);
    return static_cast<double>(s >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * next(); }
  int uniform_int(int a, int b) {  // inclusive
    return a + static_cast<int>(next() * (b - a + 1)) % (b - a + 1);
  }
  double signed_amp() {
    const double a = uniform(0.2, 1.0);
    return next() < 0.5 ? -a : a;
  }
};

double raised_cosine(double x, double c, double w) {
  const double d = std::abs(x - c);
  if (d >= w) return 0.0;
  const double t = std::cos(0.5 * kPi * d / w);
  return t * t;
}

std::vector<double> gen_bumps(Rng& rng, const Grid& g, double W, bool near_left) {
  const int nb = near_left ? 1 : rng.uniform_int(1, 3);
  std::vector<double> centers(nb), widths(nb), amps(nb);
  for (int b = 0; b < nb; ++b) {
    if (near_left) {
      widths[b] = rng.uniform(0.02 * W, 0.06 * W);
      centers[b] = rng.uniform(widths[b] + 0.005 * W, 0.1 * W + widths[b]);
    } else {
      widths[b] = rng.uniform(0.05 * W, 0.18 * W);
      centers[b] = rng.uniform(0.2 * W, 0.8 * W);
    }
    amps[b] = rng.signed_amp();
  }
  std::vector<double> v(g.n_cells, 0.0);
  for (int i = 0; i < g.n_cells; ++i) {
    const double x = g.center(i) - g.x_min;
    double s = 0.0;
    for (int b = 0; b < nb; ++b) s += amps[b] * raised_cosine(x, centers[b], widths[b]);
    v[i] = s;
  }
  return v;
}

std::vector<double> gen_piecewise(Rng& rng, const Grid& g, double W, SampleBC bc) {
  const int nseg = rng.uniform_int(3, 8);
  std::vector<double> breaks(nseg - 1);
  for (double& b : breaks) b = rng.uniform(0.05 * W, 0.95 * W);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> levels(nseg);
  for (double& l : levels) l = rng.signed_amp();
  if (bc == SampleBC::LeftZero || bc == SampleBC::Neumann) levels.front() = 0.0;
  if (bc == SampleBC::RightZero || bc == SampleBC::Neumann) levels.back() = 0.0;
  std::vector<double> v(g.n_cells, 0.0);
  for (int i = 0; i < g.n_cells; ++i) {
    const double x = g.center(i) - g.x_min;
    if (x > W) break;
    int seg = 0;
    while (seg < nseg - 1 && x > breaks[seg]) ++seg;
    v[i] = levels[seg];
  }
  return v;
}

std::vector<double> gen_boundary(Rng& rng, const Grid& g, double W) {
  const double h = rng.uniform(1.0, 100.0);
  const double w = rng.uniform(2.0 * g.dx(), std::max(4.0 * g.dx(), 0.05 * W));
  std::vector<double> v(g.n_cells, 0.0);
  for (int i = 0; i < g.n_cells; ++i) {
    const double x = g.center(i) - g.x_min;
    if (x > w) break;
    v[i] = h;
  }
  return v;
}

std::vector<double> gen_smooth_modes(Rng& rng, const Grid& g, double W, SampleBC bc) {
  const int n_modes = 7;
  std::vector<double> amps(n_modes);
  for (int m = 0; m < n_modes; ++m) amps[m] = rng.signed_amp() * std::pow(2.0, -0.5 * m);
  std::vector<double> v(g.n_cells, 0.0);
  for (int i = 0; i < g.n_cells; ++i) {
    const double x = g.center(i) - g.x_min;
    if (x > W) break;
    double s = 0.0;
    for (int m = 0; m < n_modes; ++m) {
      if (bc == SampleBC::Neumann)
        s += amps[m] * std::cos(m * kPi * x / W);
      else if (bc == SampleBC::None)
        s += amps[m] * std::cos((m + 0.5) * kPi * x / W);
      else  // LeftZero / RightZero: sine modes vanish at both ends
        s += amps[m] * std::sin((m + 1) * kPi * x / W);
    }
    v[i] = s;
  }
  return v;
}

}  // namespace

SampleFamily sample_family_from_string(const std::string& s) {
  if (s == "bumps") return SampleFamily::Bumps;
  if (s == "random_piecewise") return SampleFamily::RandomPiecewise;
  if (s == "boundary_concentrated") return SampleFamily::BoundaryConcentrated;
  if (s == "smooth_modes") return SampleFamily::SmoothModes;
  if (s == "mixed") return SampleFamily::Mixed;
  throw std::invalid_argument("unknown sample family: " + s);
}

std::string to_string(SampleFamily f) {
  switch (f) {
    case SampleFamily::Bumps: return "bumps";
    case SampleFamily::RandomPiecewise: return "random_piecewise";
    case SampleFamily::BoundaryConcentrated: return "boundary_concentrated";
    case SampleFamily::SmoothModes: return "smooth_modes";
    case SampleFamily::Mixed: return "mixed";
  }
  return "?";
}

std::vector<GridFunction> make_samples(const SampleSpec& spec, const Grid& grid, NormTag tag,
                                       SampleBC bc, double support_max) {
  if (spec.count < 1) throw std::invalid_argument("make_samples: count must be positive");
  const double W = std::min(support_max, grid.length());
  if (!(W > 2.0 * grid.dx()))
    throw std::invalid_argument("make_samples: support window too small for the grid");
  std::vector<GridFunction> out;
  out.reserve(spec.count);
  for (int idx = 0; idx < spec.count; ++idx) {
    Rng rng(splitmix64(spec.seed + 0x100000001b3ULL * static_cast<std::uint64_t>(idx)) ^
            (static_cast<std::uint64_t>(spec.family) << 56));
    SampleFamily fam = spec.family;
    if (fam == SampleFamily::Mixed) {
      static const SampleFamily rota[4] = {SampleFamily::Bumps, SampleFamily::RandomPiecewise,
                                           SampleFamily::BoundaryConcentrated,
                                           SampleFamily::SmoothModes};
      fam = rota[idx % 4];
    }
    // Boundary plateaus do not satisfy domain constraints; substitute a
    // left-concentrated bump when the caller asked for D(A)-style samples.
    const bool domain_bc = bc != SampleBC::None;
    std::vector<double> v;
    switch (fam) {
      case SampleFamily::Bumps:
        v = gen_bumps(rng, grid, W, false);
        break;
      case SampleFamily::RandomPiecewise:
        v = gen_piecewise(rng, grid, W, bc);
        break;
      case SampleFamily::BoundaryConcentrated:
        v = domain_bc ? gen_bumps(rng, grid, W, true) : gen_boundary(rng, grid, W);
        break;
      case SampleFamily::SmoothModes:
        v = gen_smooth_modes(rng, grid, W, bc);
        break;
      case SampleFamily::Mixed:
        break;  // unreachable
    }
    GridFunction y(grid, std::move(v), tag);
    if (norm(y) < 1e-12) {  // cannot happen with the amplitude floor, but stay safe
      y[grid.n_cells / 4] = 1.0;
    }
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<std::vector<double>> make_time_profiles(const SampleSpec& spec, int n_t, double T) {
  std::vector<std::vector<double>> out;
  out.reserve(spec.count);
  const double dt = T / n_t;
  for (int idx = 0; idx < spec.count; ++idx) {
    Rng rng(splitmix64(spec.seed ^ 0x9e3779b97f4a7c15ULL) + 0x100000001b3ULL * idx);
    std::vector<double> g(n_t, 0.0);
    if (idx % 2 == 0) {
      const int nseg = rng.uniform_int(2, 5);
      std::vector<double> breaks(nseg - 1);
      for (double& b : breaks) b = rng.uniform(0.0, T);
      std::sort(breaks.begin(), breaks.end());
      std::vector<double> levels(nseg);
      for (double& l : levels) l = rng.signed_amp();
      for (int j = 0; j < n_t; ++j) {
        const double s = j * dt;
        int seg = 0;
        while (seg < nseg - 1 && s > breaks[seg]) ++seg;
        g[j] = levels[seg];
      }
    } else {
      const double c = rng.uniform(0.2 * T, 0.8 * T);
      const double w = rng.uniform(0.1 * T, 0.4 * T);
      const double a = rng.signed_amp();
      for (int j = 0; j < n_t; ++j) g[j] = a * raised_cosine(j * dt, c, w);
      g[n_t / 2] += (g[n_t / 2] == 0.0) ? a : 0.0;  // keep the profile nonzero
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace stabcert
