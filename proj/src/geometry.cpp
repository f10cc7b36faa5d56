#include "emforms/geometry.hpp"

#include <cmath>

#include "emforms/errors.hpp"

namespace emforms {

OneForm interior_product(const FourVector& v, const TwoFormMatrix& w) {
  OneForm a;
  for (int nu = 0; nu < 4; ++nu) {
    double s = 0.0;
    for (int mu = 0; mu < 4; ++mu) s += v[mu] * w(mu, nu);
    a.a[nu] = s;
  }
  return a;
}

double wedge_22(const TwoFormMatrix& a, const TwoFormMatrix& b) {
  // Only index pairs forming a permutation of {0,1,2,3} survive. Enumerate the
  // three partitions into ordered pairs and use antisymmetry for the rest:
  //   eps_{01 23} = +1, eps_{02 13} = -1, eps_{03 12} = +1,
  // each appearing 4 ways in the unrestricted sum, cancelling the 1/4.
  return a(0, 1) * b(2, 3) + a(2, 3) * b(0, 1)
       - a(0, 2) * b(1, 3) - a(1, 3) * b(0, 2)
       + a(0, 3) * b(1, 2) + a(1, 2) * b(0, 3);
}

double pfaffian_2form(const TwoFormMatrix& w) {
  return w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2);
}

double det_2form(const TwoFormMatrix& w) {
  // Direct 4x4 determinant by cofactor expansion along row 0.
  auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return w(r0, c0) * (w(r1, c1) * w(r2, c2) - w(r1, c2) * w(r2, c1)) -
           w(r0, c1) * (w(r1, c0) * w(r2, c2) - w(r1, c2) * w(r2, c0)) +
           w(r0, c2) * (w(r1, c0) * w(r2, c1) - w(r1, c1) * w(r2, c0));
  };
  return w(0, 0) * minor3(1, 2, 3, 1, 2, 3) - w(0, 1) * minor3(1, 2, 3, 0, 2, 3) +
         w(0, 2) * minor3(1, 2, 3, 0, 1, 3) - w(0, 3) * minor3(1, 2, 3, 0, 1, 2);
}

namespace {

struct TwoFormPartials {
  // d[mu](i,j) = central difference of F_ij along q_mu
  std::array<TwoFormMatrix, 4> d;
};

// NaN never survives a max() reduction (comparisons are false), so finiteness
// is checked entry by entry.
bool finite_2form(const TwoFormMatrix& w) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!std::isfinite(w(i, j))) return false;
  return true;
}

TwoFormPartials partials_2form(const TwoFormSampler& f, const SpacetimeEvent& x, double h) {
  TwoFormPartials out;
  for (int mu = 0; mu < 4; ++mu) {
    SpacetimeEvent xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    const TwoFormMatrix fp = f(xp), fm = f(xm);
    if (!finite_2form(fp) || !finite_2form(fm))
      throw NonFinite("2-form sample near stencil point");
    out.d[mu] = (fp - fm) * (1.0 / (2.0 * h));
  }
  return out;
}

}  // namespace

ThreeForm exterior_derivative_2form(const TwoFormSampler& f, const SpacetimeEvent& x,
                                    const StencilConfig& cfg) {
  const TwoFormPartials p = partials_2form(f, x, cfg.h);
  auto comp = [&](int a, int m, int n) {
    return p.d[a](m, n) - p.d[m](a, n) + p.d[n](a, m);
  };
  ThreeForm out;
  out.s = comp(1, 2, 3);
  out.t = {comp(0, 2, 3), -comp(0, 1, 3), comp(0, 1, 2)};
  return out;
}

double exterior_derivative_3form(const ThreeFormSampler& j, const SpacetimeEvent& x,
                                 const StencilConfig& cfg) {
  const double h = cfg.h;
  double result = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    SpacetimeEvent xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    const ThreeForm jp = j(xp), jm = j(xm);
    if (!std::isfinite(jp.s) || !finite(jp.t) || !std::isfinite(jm.s) || !finite(jm.t))
      throw NonFinite("3-form sample near stencil point");
    if (mu == 0)
      result += (jp.s - jm.s) / (2.0 * h);
    else
      result -= (jp.t[mu - 1] - jm.t[mu - 1]) / (2.0 * h);
  }
  return result;
}

}  // namespace emforms
