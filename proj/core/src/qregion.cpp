#include "seqbound/qregion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "seqbound/mem.hpp"
#include "seqbound/tolerances.hpp"

namespace seqbound {

namespace {

std::array<double, 3> clip_prior(std::array<double, 3> p) {
  for (double& v : p) v = std::max(v, tol::prior_clip);
  // Sum in sorted order so clipping commutes with coordinate permutations
  // exactly; downstream dedup of permuted halfspaces relies on bit equality.
  std::array<double, 3> s = p;
  std::sort(s.begin(), s.end());
  const double total = s[0] + s[1] + s[2];
  for (double& v : p) v /= total;
  return p;
}

constexpr std::array<std::array<int, 3>, 6> kPerms{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace

std::vector<std::array<double, 3>> sample_priors(int n, SampleScheme scheme) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  std::vector<std::array<double, 3>> out;
  if (scheme == SampleScheme::grid) {
    if (n == 1) {
      out.push_back(clip_prior({1.0 / 3, 1.0 / 3, 1.0 / 3}));
      return out;
    }
    const int d = n - 1;
    out.reserve(static_cast<size_t>(n) * (n + 1) / 2);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d - i; ++j) {
        const int k = d - i - j;
        out.push_back(clip_prior({double(i) / d, double(j) / d, double(k) / d}));
      }
  } else {
    // Golden-ratio sequence on the unit square folded onto the simplex.
    const double inv_phi = 2.0 / (1.0 + std::sqrt(5.0));
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
      double u = std::fmod((i + 0.5) * inv_phi, 1.0);
      double v = (i + 0.5) / n;
      if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      out.push_back(clip_prior({u, v, 1.0 - u - v}));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SupportingPlanes supporting_halfspaces(const CoherentEnsemble& e,
                                       std::span<const std::array<double, 3>> priors,
                                       int workers) {
  if (priors.empty()) throw std::invalid_argument("empty priors list");

  // One solve per sorted-prior class; permutations of a prior are exact
  // permutations of its doubles, so sorting canonicalizes without tolerance.
  std::set<std::array<double, 3>> canon_set;
  for (const std::array<double, 3>& p : priors) {
    std::array<double, 3> s = p;
    std::sort(s.begin(), s.end(), std::greater<>());
    canon_set.insert(s);
  }
  std::vector<std::array<double, 3>> canon(canon_set.begin(), canon_set.end());

  std::vector<double> offsets(canon.size());
  std::atomic<int> failures{0};
  detail::parallel_for(static_cast<int>(canon.size()), workers, [&](int i) {
    try {
      offsets[i] = solve_mem(e, canon[i]).certified_upper;
    } catch (const MemConvergenceError& err) {
      offsets[i] = err.partial().certified_upper;  // still a valid upper bound
      failures.fetch_add(1);
    }
  });

  std::vector<Halfspace3> planes;
  planes.reserve(canon.size() * 6);
  for (size_t i = 0; i < canon.size(); ++i)
    for (const std::array<int, 3>& perm : kPerms)
      planes.push_back(
          {{canon[i][perm[0]], canon[i][perm[1]], canon[i][perm[2]]}, offsets[i]});

  std::sort(planes.begin(), planes.end(), [](const Halfspace3& a, const Halfspace3& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  });
  std::vector<Halfspace3> dedup;
  dedup.reserve(planes.size());
  for (const Halfspace3& h : planes) {
    if (!dedup.empty()) {
      const Halfspace3& last = dedup.back();
      if (std::abs(h.normal[0] - last.normal[0]) <= tol::halfspace_dedup &&
          std::abs(h.normal[1] - last.normal[1]) <= tol::halfspace_dedup &&
          std::abs(h.normal[2] - last.normal[2]) <= tol::halfspace_dedup &&
          std::abs(h.offset - last.offset) <= tol::halfspace_dedup)
        continue;
    }
    dedup.push_back(h);
  }
  return {std::move(dedup), failures.load()};
}

QPolytope assemble_qpolytope(std::vector<Halfspace3> supporting) {
  if (supporting.empty()) throw std::invalid_argument("no supporting halfspaces");
  QPolytope p;
  p.halfspaces.reserve(supporting.size() + kBoxFaceCount);
  for (int m = 0; m < 3; ++m) {
    Halfspace3 h;
    h.normal[m] = 1.0;
    h.offset = 1.0;
    p.halfspaces.push_back(h);
  }
  for (int m = 0; m < 3; ++m) {
    Halfspace3 h;
    h.normal[m] = -1.0;
    h.offset = 0.0;
    p.halfspaces.push_back(h);
  }
  p.halfspaces.insert(p.halfspaces.end(), supporting.begin(), supporting.end());
  return p;
}

QPolytope build_qpolytope(const CoherentEnsemble& e,
                          std::span<const std::array<double, 3>> priors, int workers) {
  return assemble_qpolytope(supporting_halfspaces(e, priors, workers).planes);
}

std::string halfspace_cache_name(double mean_photon, std::string_view scheme, int n) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "halfspaces_%.*s_%d_nbar_%.12g.csv",
                static_cast<int>(scheme.size()), scheme.data(), n, mean_photon);
  return buf;
}

std::optional<std::vector<Halfspace3>> load_halfspaces(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  std::vector<Halfspace3> planes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Halfspace3 h;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &h.normal[0], &h.normal[1],
                    &h.normal[2], &h.offset) != 4)
      return std::nullopt;
    planes.push_back(h);
  }
  if (planes.empty()) return std::nullopt;
  return planes;
}

void save_halfspaces(const std::filesystem::path& file, std::span<const Halfspace3> planes) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write cache file " + file.string());
  out << "# p1,p2,p3,offset\n";
  char buf[160];
  for (const Halfspace3& h : planes) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", h.normal[0], h.normal[1],
                  h.normal[2], h.offset);
    out << buf;
  }
}

}  // namespace seqbound
