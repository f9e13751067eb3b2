#include "lorentz/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lorentz {

namespace {

struct OpenInterval {
  double lo;
  double hi;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open intervals of the traces on the real line. On the circle each trace is
// repeated one period left and right; a trace wider than the circle becomes
// the whole line.
std::vector<OpenInterval> unroll(const SurfaceDomain& domain, const std::vector<SurfaceTrace>& traces) {
  std::vector<OpenInterval> out;
  for (const SurfaceTrace& t : traces) {
    if (!(t.radius > 0.0)) continue;
    if (domain.periodic && t.radius > 0.5 * domain.circumference) {
      out.push_back({-kInf, kInf});
      continue;
    }
    const double lo = std::nextafter(t.center - t.radius, kInf);
    const double hi = std::nextafter(t.center + t.radius, -kInf);
    if (!(lo < hi)) continue;
    if (domain.periodic) {
      for (int k = -1; k <= 1; ++k) {
        out.push_back({lo + k * domain.circumference, hi + k * domain.circumference});
      }
    } else {
      out.push_back({lo, hi});
    }
  }
  std::sort(out.begin(), out.end(), [](const OpenInterval& a, const OpenInterval& b) { return a.lo < b.lo; });
  return out;
}

// Closed complement of a union of open intervals inside [lo, hi].
std::vector<ClosedInterval> complement(const std::vector<OpenInterval>& sorted, double lo, double hi) {
  std::vector<ClosedInterval> pieces;
  double cur = lo;
  for (const OpenInterval& iv : sorted) {
    if (cur > hi) break;
    if (iv.hi <= cur) continue;
    if (iv.lo < cur) {
      cur = iv.hi;
      continue;
    }
    pieces.push_back({cur, std::min(iv.lo, hi)});
    cur = iv.hi;
  }
  if (cur <= hi) pieces.push_back({cur, hi});
  return pieces;
}

// Whether the closed interval [a, b] lies inside the union of open intervals.
std::optional<double> first_uncovered(const std::vector<OpenInterval>& cover, double a, double b) {
  double cur = a;
  while (cur <= b) {
    double reach = cur;
    for (const OpenInterval& iv : cover) {
      if (iv.lo < cur && iv.hi > reach) reach = iv.hi;
    }
    if (reach <= cur) return cur;
    cur = reach;
  }
  return std::nullopt;
}

}  // namespace

CoverCertificate certify_cover(const SurfaceDomain& domain, const std::vector<SurfaceTrace>& cover,
                               const std::vector<SurfaceTrace>& holes) {
  CoverCertificate cert;
  const double lo = domain.periodic ? 0.0 : domain.lo;
  const double hi = domain.periodic ? domain.circumference : domain.hi;
  cert.target = complement(unroll(domain, holes), lo, hi);
  const std::vector<OpenInterval> covering = unroll(domain, cover);
  cert.covered = true;
  for (const ClosedInterval& piece : cert.target) {
    if (auto miss = first_uncovered(covering, piece.lo, piece.hi)) {
      cert.covered = false;
      cert.uncovered_point = *miss;
      break;
    }
  }
  return cert;
}

}  // namespace lorentz
