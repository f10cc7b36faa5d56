#include "emforms/lorentz.hpp"

#include <cmath>

#include "emforms/errors.hpp"

namespace emforms {

namespace {
constexpr double kMetric[4] = {-1.0, 1.0, 1.0, 1.0};
}

LorentzMatrix LorentzMatrix::identity() {
  LorentzMatrix l;
  for (int i = 0; i < 4; ++i) l.lambda[i][i] = 1.0;
  return l;
}

LorentzMatrix LorentzMatrix::operator*(const LorentzMatrix& o) const {
  LorentzMatrix r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += lambda[i][k] * o.lambda[k][j];
      r.lambda[i][j] = s;
    }
  return r;
}

LorentzMatrix LorentzMatrix::inverse() const {
  LorentzMatrix r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.lambda[i][j] = kMetric[i] * lambda[j][i] * kMetric[j];
  return r;
}

double LorentzMatrix::orthogonality_residual() const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += lambda[k][i] * kMetric[k] * lambda[k][j];
      double g = (i == j) ? kMetric[i] : 0.0;
      worst = std::max(worst, std::abs(s - g));
    }
  return worst;
}

double LorentzMatrix::det() const {
  // Expansion via 2x2 minors of the top two rows (enough at fixed size 4).
  auto m2 = [&](int r0, int r1, int c0, int c1) {
    return lambda[r0][c0] * lambda[r1][c1] - lambda[r0][c1] * lambda[r1][c0];
  };
  return m2(0, 1, 0, 1) * m2(2, 3, 2, 3) - m2(0, 1, 0, 2) * m2(2, 3, 1, 3) +
         m2(0, 1, 0, 3) * m2(2, 3, 1, 2) + m2(0, 1, 1, 2) * m2(2, 3, 0, 3) -
         m2(0, 1, 1, 3) * m2(2, 3, 0, 2) + m2(0, 1, 2, 3) * m2(2, 3, 0, 1);
}

LorentzMatrix boost(const Vec3& beta) {
  const double b2 = norm2(beta);
  if (b2 >= 1.0) throw SuperluminalBoost(b2);
  LorentzMatrix l = LorentzMatrix::identity();
  if (b2 == 0.0) return l;
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  l.lambda[0][0] = gamma;
  for (int i = 0; i < 3; ++i) {
    l.lambda[0][i + 1] = -gamma * beta[i];
    l.lambda[i + 1][0] = -gamma * beta[i];
    for (int j = 0; j < 3; ++j)
      l.lambda[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + (gamma - 1.0) * beta[i] * beta[j] / b2;
  }
  return l;
}

LorentzMatrix rotation(const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const Vec3& n = axis;
  // Rodrigues: R = c I + (1-c) n n^T + s K, with K the cross-product matrix.
  const double K[3][3] = {{0, -n.z, n.y}, {n.z, 0, -n.x}, {-n.y, n.x, 0}};
  LorentzMatrix l = LorentzMatrix::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      l.lambda[i + 1][j + 1] = c * (i == j ? 1.0 : 0.0) + (1.0 - c) * n[i] * n[j] + s * K[i][j];
  return l;
}

TwoFormMatrix transform_2form(const LorentzMatrix& lam, const TwoFormMatrix& w) {
  const LorentzMatrix inv = lam.inverse();
  std::array<std::array<double, 4>, 4> raw{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) s += inv.lambda[m][a] * w(m, n) * inv.lambda[n][b];
      raw[a][b] = s;
    }
  return TwoFormMatrix::antisymmetrize(raw);
}

EMFieldSample fields_from_omega_f(const TwoFormMatrix& w) {
  EMFieldSample f;
  f.E = {w(0, 1), w(0, 2), w(0, 3)};
  f.B = {-w(2, 3), w(1, 3), -w(1, 2)};
  return f;
}

double dual_invariance_residual_eta(const LorentzMatrix& lam, const EMFieldSample& f,
                                    double eta) {
  const Medium m(eta, 1.0);
  const TwoFormMatrix direct = transform_2form(lam, omega_f_star(f, m));
  const EMFieldSample tilde = fields_from_omega_f(transform_2form(lam, omega_f(f)));
  const TwoFormMatrix rebuilt = omega_f_star(tilde, m);
  return (direct - rebuilt).max_abs();
}

double dual_invariance_residual(const LorentzMatrix& lam, const EMFieldSample& f) {
  return dual_invariance_residual_eta(lam, f, 1.0);
}

std::pair<double, double> scalar_invariants_check(const LorentzMatrix& lam,
                                                  const EMFieldSample& f) {
  const Medium vac(1.0, 1.0);
  const TwoFormMatrix before_f = omega_f(f);
  const TwoFormMatrix after_f = transform_2form(lam, before_f);
  const double eb_before = std::sqrt(std::max(0.0, det_2form(before_f)));
  const double eb_after = std::sqrt(std::max(0.0, det_2form(after_f)));
  const double wedge_before = wedge_22(omega_f_star(f, vac), before_f);
  const double wedge_after = wedge_22(transform_2form(lam, omega_f_star(f, vac)), after_f);
  return {std::abs(eb_after - eb_before), std::abs(wedge_after - wedge_before)};
}

}  // namespace emforms
