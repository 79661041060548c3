#pragma once

// Finite unions of real intervals, closed under complement, intersection and
// union. These index the spectral measure of a finite decomposition.
//
// Membership is tested with a tolerance band: a closed endpoint admits
// x >= a - tol, an open endpoint requires x > a + tol. With this convention a
// set and its complement partition the real line for every tol >= 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bqm/types.hpp"

namespace bqm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool empty() const noexcept {
    if (lo > hi) return true;
    return lo == hi && !(lo_closed && hi_closed);
  }

  bool contains(double x, double tol) const noexcept {
    const bool above = lo_closed ? x >= lo - tol : x > lo + tol;
    const bool below = hi_closed ? x <= hi + tol : x < hi - tol;
    return above && below;
  }
};

class SpectralSet {
 public:
  SpectralSet() = default;

  static SpectralSet empty_set() { return {}; }
  static SpectralSet reals() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return SpectralSet({Interval{-inf, inf, false, false}});
  }
  static SpectralSet point(double x) { return SpectralSet({Interval{x, x, true, true}}); }
  static SpectralSet points(std::span<const double> xs) {
    std::vector<Interval> pieces;
    for (double x : xs) pieces.push_back({x, x, true, true});
    return SpectralSet(std::move(pieces));
  }
  static SpectralSet interval(double lo, double hi, bool lo_closed = true, bool hi_closed = true) {
    return SpectralSet({Interval{lo, hi, lo_closed, hi_closed}});
  }

  explicit SpectralSet(std::vector<Interval> pieces) : pieces_(std::move(pieces)) { normalize(); }

  const std::vector<Interval>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  bool contains(double x, double tol = 0.0) const noexcept {
    return std::any_of(pieces_.begin(), pieces_.end(),
                       [&](const Interval& iv) { return iv.contains(x, tol); });
  }

  /// A complex eigenvalue belongs to a real set only if it is real within
  /// imag_tol.
  bool contains(Complex z, double tol, double imag_tol) const noexcept {
    return std::abs(z.imag()) <= imag_tol && contains(z.real(), tol);
  }

  SpectralSet complement() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Interval> out;
    double cursor = -inf;
    bool cursor_closed = false;  // whether the gap starting at cursor includes it
    for (const Interval& iv : pieces_) {
      Interval gap{cursor, iv.lo, cursor_closed, !iv.lo_closed};
      if (!gap.empty()) out.push_back(gap);
      cursor = iv.hi;
      cursor_closed = !iv.hi_closed;
    }
    Interval tail{cursor, inf, cursor_closed, false};
    if (!tail.empty()) out.push_back(tail);
    return SpectralSet(std::move(out));
  }

  SpectralSet intersect(const SpectralSet& other) const {
    std::vector<Interval> out;
    for (const Interval& a : pieces_) {
      for (const Interval& b : other.pieces_) {
        Interval c;
        if (a.lo > b.lo) {
          c.lo = a.lo;
          c.lo_closed = a.lo_closed;
        } else if (b.lo > a.lo) {
          c.lo = b.lo;
          c.lo_closed = b.lo_closed;
        } else {
          c.lo = a.lo;
          c.lo_closed = a.lo_closed && b.lo_closed;
        }
        if (a.hi < b.hi) {
          c.hi = a.hi;
          c.hi_closed = a.hi_closed;
        } else if (b.hi < a.hi) {
          c.hi = b.hi;
          c.hi_closed = b.hi_closed;
        } else {
          c.hi = a.hi;
          c.hi_closed = a.hi_closed && b.hi_closed;
        }
        if (!c.empty()) out.push_back(c);
      }
    }
    return SpectralSet(std::move(out));
  }

  SpectralSet unite(const SpectralSet& other) const {
    std::vector<Interval> out = pieces_;
    out.insert(out.end(), other.pieces_.begin(), other.pieces_.end());
    return SpectralSet(std::move(out));
  }

  SpectralSet minus(const SpectralSet& other) const { return intersect(other.complement()); }

  std::string describe() const {
    if (pieces_.empty()) return "{}";
    std::string s;
    for (const Interval& iv : pieces_) {
      if (!s.empty()) s += " U ";
      if (iv.lo == iv.hi) {
        s += "{" + std::to_string(iv.lo) + "}";
      } else {
        s += (iv.lo_closed ? "[" : "(") + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
             (iv.hi_closed ? "]" : ")");
      }
    }
    return s;
  }

 private:
  // Sorted, pairwise disjoint, non-touching pieces.
  void normalize() {
    std::erase_if(pieces_, [](const Interval& iv) { return iv.empty() || std::isnan(iv.lo) || std::isnan(iv.hi); });
    std::sort(pieces_.begin(), pieces_.end(), [](const Interval& a, const Interval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    std::vector<Interval> merged;
    for (const Interval& iv : pieces_) {
      if (!merged.empty()) {
        Interval& last = merged.back();
        const bool overlaps = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
        if (overlaps) {
          if (iv.hi > last.hi) {
            last.hi = iv.hi;
            last.hi_closed = iv.hi_closed;
          } else if (iv.hi == last.hi) {
            last.hi_closed = last.hi_closed || iv.hi_closed;
          }
          continue;
        }
      }
      merged.push_back(iv);
    }
    pieces_ = std::move(merged);
  }

  std::vector<Interval> pieces_;
};

}  // namespace bqm
