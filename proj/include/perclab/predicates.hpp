#pragma once

// Orientation and in-circle predicates: filtered double evaluation with an
// exact fallback built on nonoverlapping floating-point expansions
// (Shewchuk's technique), plus index-based symbolic perturbation so that
// degenerate inputs (collinear triples, cocircular quadruples) get a
// deterministic answer.
//
// Perturbation rule. Points carry their construction index. For in-circle
// ties, point i behaves as if lifted to the paraboloid at height
// |p_i|^2 - eps^(i+1): lower-index points count as slightly closer to the
// inside of any circle through them. For orientation ties, y-coordinates are
// perturbed by delta^(i+1) (and x-coordinates at a smaller scale) with
// eps >> delta. The perturbed predicates never return zero for distinct
// points, and the in-circle tie resolves by the smallest index involved.

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "perclab/common.hpp"

#ifdef PERC_COUNTERS
extern long long g_orient, g_incircle;
#endif

namespace perc {
namespace detail {

inline constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
inline constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bv = x - a;
  double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

// h = e + b, e nonoverlapping increasing; returns new length (<= elen+1).
inline int grow_expansion(int elen, const double* e, double b, double* h) {
  double q = b;
  int hlen = 0;
  for (int i = 0; i < elen; ++i) {
    double qn, hh;
    two_sum(q, e[i], qn, hh);
    if (hh != 0.0) h[hlen++] = hh;
    q = qn;
  }
  if (q != 0.0 || hlen == 0) h[hlen++] = q;
  return hlen;
}

// h = e + f, both nonoverlapping; zero-eliminating.
inline int expansion_sum(int elen, const double* e, int flen, const double* f, double* h) {
  double tmp[1600];
  int n = 0;
  for (int i = 0; i < elen; ++i) tmp[n++] = e[i];
  double out[1600];
  int olen = n;
  for (int i = 0; i < n; ++i) out[i] = tmp[i];
  for (int i = 0; i < flen; ++i) {
    double buf[1600];
    int blen = grow_expansion(olen, out, f[i], buf);
    olen = blen;
    for (int k = 0; k < blen; ++k) out[k] = buf[k];
  }
  for (int k = 0; k < olen; ++k) h[k] = out[k];
  return olen;
}

// h = e * b; zero-eliminating.
inline int scale_expansion(int elen, const double* e, double b, double* h) {
  if (b == 0.0) {
    h[0] = 0.0;
    return 1;
  }
  double acc[1600];
  int alen = 0;
  acc[alen++] = 0.0;
  for (int i = 0; i < elen; ++i) {
    double p, perr;
    two_product(e[i], b, p, perr);
    double buf[1600];
    int blen = grow_expansion(alen, acc, perr, buf);
    blen = grow_expansion(blen, buf, p, acc);
    alen = blen;
  }
  for (int k = 0; k < alen; ++k) h[k] = acc[k];
  return alen;
}

inline int expansion_sign(int elen, const double* e) {
  // Nonoverlapping, increasing magnitude: the top nonzero component decides.
  for (int i = elen - 1; i >= 0; --i) {
    if (e[i] > 0.0) return 1;
    if (e[i] < 0.0) return -1;
  }
  return 0;
}

inline int exact_orient2d(Vec2 a, Vec2 b, Vec2 c) {
  // det = ax(by-cy) - ay(bx-cx) + (bx*cy - by*cx), expanded over the six
  // products so every term is exact.
  double terms[6][2];
  two_product(a.x, b.y, terms[0][1], terms[0][0]);
  two_product(a.x, c.y, terms[1][1], terms[1][0]);
  terms[1][0] = -terms[1][0];
  terms[1][1] = -terms[1][1];
  two_product(a.y, b.x, terms[2][1], terms[2][0]);
  terms[2][0] = -terms[2][0];
  terms[2][1] = -terms[2][1];
  two_product(a.y, c.x, terms[3][1], terms[3][0]);
  two_product(b.x, c.y, terms[4][1], terms[4][0]);
  two_product(b.y, c.x, terms[5][1], terms[5][0]);
  terms[5][0] = -terms[5][0];
  terms[5][1] = -terms[5][1];
  double e[32];
  int elen = 1;
  e[0] = 0.0;
  for (auto& t : terms) {
    double buf[32];
    int blen = grow_expansion(elen, e, t[0], buf);
    blen = grow_expansion(blen, buf, t[1], e);
    elen = blen;
  }
  return expansion_sign(elen, e);
}

// Exact sign of the 4x4 in-circle determinant with rows
// [x, y, x^2+y^2, 1] for a, b, c, d.
inline int exact_incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 pts[4] = {a, b, c, d};
  double total[1600];
  int tlen = 1;
  total[0] = 0.0;

  // D = -det3(b,c,d) + det3(a,c,d) - det3(a,b,d) + det3(a,b,c)
  // det3(p,q,r) = zp*cross(q,r) - zq*cross(p,r) + zr*cross(p,q), z = x^2+y^2.
  const int rows[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  const int outer_sign[4] = {-1, +1, -1, +1};
  for (int t = 0; t < 4; ++t) {
    Vec2 p = pts[rows[t][0]], q = pts[rows[t][1]], r = pts[rows[t][2]];
    const Vec2 tri[3] = {p, q, r};
    const int inner_sign[3] = {+1, -1, +1};
    for (int m = 0; m < 3; ++m) {
      Vec2 zp = tri[m];
      // cross over the other two rows in order
      Vec2 u, v;
      if (m == 0) {
        u = q;
        v = r;
      } else if (m == 1) {
        u = p;
        v = r;
      } else {
        u = p;
        v = q;
      }
      // z = zp.x^2 + zp.y^2 as an expansion
      double zx[2], zy[2], z[8];
      two_product(zp.x, zp.x, zx[1], zx[0]);
      two_product(zp.y, zp.y, zy[1], zy[0]);
      int zlen = expansion_sum(2, zx, 2, zy, z);
      // cross(u, v) = ux*vy - uy*vx as an expansion
      double c1[2], c2[2], cr[8];
      two_product(u.x, v.y, c1[1], c1[0]);
      two_product(u.y, v.x, c2[1], c2[0]);
      c2[0] = -c2[0];
      c2[1] = -c2[1];
      int clen = expansion_sum(2, c1, 2, c2, cr);
      // term = z * cross, scaled by signs
      double term[512];
      int termlen = 1;
      term[0] = 0.0;
      for (int zi = 0; zi < zlen; ++zi) {
        double part[64];
        int plen = scale_expansion(clen, cr, z[zi], part);
        double buf[600];
        int blen = expansion_sum(termlen, term, plen, part, buf);
        termlen = blen;
        for (int k = 0; k < blen; ++k) term[k] = buf[k];
      }
      double sgn = static_cast<double>(outer_sign[t] * inner_sign[m]);
      for (int k = 0; k < termlen; ++k) term[k] *= sgn;
      double buf[1600];
      int blen = expansion_sum(tlen, total, termlen, term, buf);
      tlen = blen;
      for (int k = 0; k < blen; ++k) total[k] = buf[k];
    }
  }
  return expansion_sign(tlen, total);
}

}  // namespace detail

namespace detail {
[[gnu::noinline]] inline int orient2d_exact_path(Vec2 a, Vec2 b, Vec2 c) {
  return exact_orient2d(a, b, c);
}
}  // namespace detail

// Sign of cross(b - a, c - a): +1 if (a,b,c) counterclockwise. Exact; zero
// only for truly collinear points.
[[gnu::always_inline]] inline int orient2d_sign(Vec2 a, Vec2 b, Vec2 c) {
#ifdef PERC_COUNTERS
  ++::g_orient;
#endif
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  double errbound = detail::kCcwErrBound * detsum;
  if (det >= errbound) return 1;
  if (-det >= errbound) return -1;
  return detail::orient2d_exact_path(a, b, c);
}

namespace detail {
// Collinear tie-break; see the perturbation rule at the top of the header.
[[gnu::noinline]] inline int orient2d_sos_tie(Vec2 a, int ia, Vec2 b, int ib, Vec2 c, int ic) {
  // y-perturbation level first: coefficients of delta_a, delta_b, delta_c in
  // the determinant, scanned in increasing global index order.
  struct Slot {
    int idx;
    double coeff;
  };
  Slot ylevel[3] = {{ia, c.x - b.x}, {ib, a.x - c.x}, {ic, b.x - a.x}};
  Slot xlevel[3] = {{ia, b.y - c.y}, {ib, c.y - a.y}, {ic, a.y - b.y}};
  auto scan = [](Slot (&slots)[3]) -> int {
    int order[3] = {0, 1, 2};
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (slots[order[j]].idx < slots[order[i]].idx) std::swap(order[i], order[j]);
    for (int k = 0; k < 3; ++k) {
      double cf = slots[order[k]].coeff;
      if (cf > 0.0) return 1;
      if (cf < 0.0) return -1;
    }
    return 0;
  };
  int s = scan(ylevel);
  if (s != 0) return s;
  s = scan(xlevel);
  if (s != 0) return s;
  throw std::invalid_argument("orient2d_sos: duplicate points");
}
}  // namespace detail

// Symbolically perturbed orientation: never zero for distinct points.
// ia/ib/ic are the points' construction indices.
[[gnu::always_inline]] inline int orient2d_sos(Vec2 a, int ia, Vec2 b, int ib, Vec2 c, int ic) {
  int s = orient2d_sign(a, b, c);
  if (s != 0) return s;
  return detail::orient2d_sos_tie(a, ia, b, ib, c, ic);
}

namespace detail {
[[gnu::noinline]] inline int incircle_exact_path(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  return exact_incircle(a, b, c, d);
}
}  // namespace detail

// Sign of the in-circle determinant: for counterclockwise (a,b,c), positive
// iff d lies strictly inside the circumcircle. Exact; zero iff cocircular.
[[gnu::always_inline]] inline int incircle_sign(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
#ifdef PERC_COUNTERS
  ++::g_incircle;
#endif
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;

  double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  double alift = adx * adx + ady * ady;
  double cdxady = cdx * ady, adxcdy = adx * cdy;
  double blift = bdx * bdx + bdy * bdy;
  double adxbdy = adx * bdy, bdxady = bdx * ady;
  double clift = cdx * cdx + cdy * cdy;

  double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
               clift * (adxbdy - bdxady);
  double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                     (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                     (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  double errbound = detail::kIccErrBound * permanent;
  if (det > errbound) return 1;
  if (-det > errbound) return -1;
  return detail::incircle_exact_path(a, b, c, d);
}

namespace detail {
[[gnu::noinline]] inline int incircle_sos_tie(Vec2 a, int ia, Vec2 b, int ib, Vec2 c, int ic,
                                              Vec2 d, int id) {
  int mn = std::min(std::min(ia, ib), std::min(ic, id));
  if (mn == ia) return -orient2d_sos(b, ib, c, ic, d, id);
  if (mn == ib) return orient2d_sos(a, ia, c, ic, d, id);
  if (mn == ic) return -orient2d_sos(a, ia, b, ib, d, id);
  return orient2d_sos(a, ia, b, ib, c, ic);
}
}  // namespace detail

// Symbolically perturbed in-circle test; never zero for distinct points.
// On an exact cocircular tie the smallest construction index decides, via the
// lifted-weight rule described at the top of this header.
[[gnu::always_inline]] inline int incircle_sos(Vec2 a, int ia, Vec2 b, int ib, Vec2 c, int ic,
                                               Vec2 d, int id) {
  int s = incircle_sign(a, b, c, d);
  if (s != 0) return s;
  return detail::incircle_sos_tie(a, ia, b, ib, c, ic, d, id);
}

}  // namespace perc
