#include "emforms/characteristic.hpp"

#include <cmath>

#include "emforms/errors.hpp"

namespace emforms {

WaveVectors wave_vectors(const PhaseSampler& phi, const SpacetimeEvent& x,
                         const StencilConfig& cfg) {
  const double h = cfg.h;
  WaveVectors out;
  for (int mu = 0; mu < 4; ++mu) {
    SpacetimeEvent xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    const double d = (phi(xp) - phi(xm)) / (2.0 * h);
    if (!std::isfinite(d)) throw NonFinite("phase sample near stencil point");
    if (mu == 0)
      out.k0 = -d;
    else
      out.k[mu - 1] = d;
  }
  return out;
}

std::optional<CharacteristicVector> characteristic_vector(const EMFieldSample& f,
                                                          const Medium& m, double tol) {
  const double e2 = norm2(f.E), b2 = norm2(f.B);
  if (e2 == 0.0 && b2 == 0.0) throw DegenerateField();
  const double eta = m.eta;
  if (std::abs(dot(f.E, f.B)) > tol * std::sqrt(e2 * b2)) return std::nullopt;
  if (std::abs(b2 - eta * e2) > tol * std::max(b2, eta * e2)) return std::nullopt;
  // Null with E = 0 would force B = 0 too (b2 = eta e2), already excluded.
  CharacteristicVector v;
  v.V0 = 1.0;
  v.V = cross(f.E, f.B) / (eta * e2);  // Y/(c w) for a null field
  return v;
}

EMFieldSample wave_field(const WaveData& w, const SpacetimeEvent& x, const StencilConfig& cfg) {
  const WaveVectors kv = wave_vectors(w.phi, x, cfg);
  const Vec3 P = w.P(x);
  if (!finite(P)) throw NonFinite("polarization sample");
  return {kv.k0 * P, cross(kv.k, P)};
}

double eikonal_residual(const PhaseSampler& phi, const Medium& m, const SpacetimeEvent& x,
                        const StencilConfig& cfg) {
  const WaveVectors kv = wave_vectors(phi, x, cfg);
  return norm2(kv.k) - m.eta * kv.k0 * kv.k0;
}

std::pair<double, double> dispersion_check(const WaveData& w, const Medium& m,
                                           const SpacetimeEvent& x, const StencilConfig& cfg,
                                           double null_tol) {
  const EMFieldSample f = wave_field(w, x, cfg);
  std::optional<CharacteristicVector> v;
  try {
    v = characteristic_vector(f, m, null_tol);
  } catch (const DegenerateField&) {
    throw NoCharacteristic();
  }
  if (!v) throw NoCharacteristic();
  const WaveVectors kv = wave_vectors(w.phi, x, cfg);
  return {v->V0 * kv.k0 - dot(v->V, kv.k), norm2(kv.k) - m.eta * kv.k0 * kv.k0};
}

}  // namespace emforms
