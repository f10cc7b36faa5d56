#include "emforms/photon_flow.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "emforms/errors.hpp"

namespace emforms {

void PhotonGridState::validate() const {
  const std::size_t want = grid.cell_count();
  if (grid.dims < 1 || grid.dims > 3)
    throw ValidationError("grid.dims", "must be 1, 2 or 3");
  for (int d = 0; d < 3; ++d) {
    if (grid.n[d] < 1) throw ValidationError("grid.n", "cell counts must be >= 1");
    if (!(grid.dx[d] > 0.0)) throw ValidationError("grid.dx", "spacings must be > 0");
  }
  if (n.size() != want) throw ValidationError("n", "array size does not match grid");
  if (phi.size() != want) throw ValidationError("phi", "array size does not match grid");
  for (double v : n)
    if (!(v >= 0.0)) throw ValidationError("n", "photon density must be >= 0");
  for (double v : phi)
    if (!std::isfinite(v)) throw ValidationError("phi", "phase must be finite");
}

IndexField uniform_index(double eta) {
  return {[eta](const Vec3&) { return eta; }, [](const Vec3&) { return Vec3{}; }};
}

namespace {

double eta_at(const IndexField& idx, const Vec3& x) {
  const double e = idx.eta(x);
  if (!(e > 0.0)) throw ValidationError("eta", "index field must be positive");
  return e;
}

double min_eta(const PhotonGridState& s, const IndexField& idx) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < s.grid.n[2]; ++k)
    for (int j = 0; j < s.grid.n[1]; ++j)
      for (int i = 0; i < s.grid.n[0]; ++i)
        m = std::min(m, eta_at(idx, s.grid.center(i, j, k)));
  return m;
}

// Neighbor cell index along axis d; outflow clamps to the edge cell
// (zero-gradient ghost), periodic wraps.
int neighbor(const GridSpec& g, int i, int d, int dir) {
  int v = i + dir;
  if (g.bc[d] == Boundary::Periodic) return (v + g.n[d]) % g.n[d];
  return std::min(std::max(v, 0), g.n[d] - 1);
}

// Central-difference gradient of the full phase Phi at cell (i,j,k); falls
// back to one-sided at outflow edges.
Vec3 grad_phi(const PhotonGridState& s, int i, int j, int k) {
  const GridSpec& g = s.grid;
  const int c[3] = {i, j, k};
  Vec3 grad = s.k_bg;
  for (int d = 0; d < 3; ++d) {
    if (g.n[d] == 1) continue;
    int lo[3] = {i, j, k}, hi[3] = {i, j, k};
    lo[d] = neighbor(g, c[d], d, -1);
    hi[d] = neighbor(g, c[d], d, +1);
    const double span = (hi[d] - lo[d] + (hi[d] < lo[d] ? g.n[d] : 0)) * g.dx[d];
    // span is 2 dx in the interior (or wrapped), dx at a clamped outflow edge
    if (span == 0.0) continue;
    grad[d] += (s.phi[g.index(hi[0], hi[1], hi[2])] - s.phi[g.index(lo[0], lo[1], lo[2])]) / span;
  }
  return grad;
}

}  // namespace

double cfl_limit(const PhotonGridState& s, const IndexField& idx, double c) {
  double dx_min = std::numeric_limits<double>::infinity();
  for (int d = 0; d < 3; ++d)
    if (s.grid.n[d] > 1) dx_min = std::min(dx_min, s.grid.dx[d]);
  if (!std::isfinite(dx_min)) dx_min = s.grid.dx[0];
  return 0.5 * dx_min * std::sqrt(min_eta(s, idx)) / c;
}

double functional_hamiltonian(const PhotonGridState& s, const IndexField& idx, double c) {
  const GridSpec& g = s.grid;
  const double vol = g.cell_volume();
  double H = 0.0;
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const double eta = eta_at(idx, g.center(i, j, k));
        H += (c / std::sqrt(eta)) * s.n[g.index(i, j, k)] * norm(grad_phi(s, i, j, k)) * vol;
      }
  return H;
}

void step_phase(PhotonGridState& s, const IndexField& idx, double dt, double c) {
  const double dt_max = cfl_limit(s, idx, c);
  if (dt > dt_max) throw CFLViolation(dt, dt_max);
  const GridSpec& g = s.grid;
  std::vector<double> out(s.phi.size());
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const int c3[3] = {i, j, k};
        // Rouy-Tourin upwind |grad Phi|^2: backward differences count when
        // positive, forward when negative; a local minimum contributes zero.
        double g2 = 0.0;
        for (int d = 0; d < 3; ++d) {
          if (g.n[d] == 1) {
            g2 += s.k_bg[d] * s.k_bg[d];
            continue;
          }
          int lo[3] = {i, j, k}, hi[3] = {i, j, k};
          lo[d] = neighbor(g, c3[d], d, -1);
          hi[d] = neighbor(g, c3[d], d, +1);
          const double here = s.phi[g.index(i, j, k)];
          const double dm = (here - s.phi[g.index(lo[0], lo[1], lo[2])]) / g.dx[d] + s.k_bg[d];
          const double dp = (s.phi[g.index(hi[0], hi[1], hi[2])] - here) / g.dx[d] + s.k_bg[d];
          const double a = std::max(dm, 0.0), b = std::min(dp, 0.0);
          g2 += a * a + b * b;
        }
        const double eta = eta_at(idx, g.center(i, j, k));
        out[g.index(i, j, k)] =
            s.phi[g.index(i, j, k)] - dt * (c / std::sqrt(eta)) * std::sqrt(g2);
      }
  s.phi.swap(out);
}

void step_density(PhotonGridState& s, const IndexField& idx, double dt, double c,
                  double eps_reg) {
  const double dt_max = cfl_limit(s, idx, c);
  if (dt > dt_max) throw CFLViolation(dt, dt_max);
  const GridSpec& g = s.grid;
  std::vector<double> out = s.n;

  // One face between cell L and its +d neighbor R; ghost = R outside an
  // outflow boundary (n_ghost = 0, zero phase gradient).
  auto apply_face = [&](int Li, int Lj, int Lk, int d, bool ghost_R) {
    const int L[3] = {Li, Lj, Lk};
    int R[3] = {Li, Lj, Lk};
    R[d] = ghost_R ? L[d] : neighbor(g, L[d], d, +1);
    const std::size_t li = g.index(L[0], L[1], L[2]);
    const std::size_t ri = g.index(R[0], R[1], R[2]);

    Vec3 grad;
    if (ghost_R) {
      grad = grad_phi(s, L[0], L[1], L[2]);
      grad[d] = s.k_bg[d];  // zero-gradient ghost in the stored part
    } else {
      const Vec3 gl = grad_phi(s, L[0], L[1], L[2]);
      const Vec3 gr = grad_phi(s, R[0], R[1], R[2]);
      grad = 0.5 * (gl + gr);
      grad[d] = (s.phi[ri] - s.phi[li]) / g.dx[d] + s.k_bg[d];  // face-natural
    }
    Vec3 face_pos = g.center(L[0], L[1], L[2]);
    face_pos[d] += 0.5 * g.dx[d];
    const double eta = eta_at(idx, face_pos);
    const double mag = std::max(norm(grad), eps_reg);
    const double v = (c / std::sqrt(eta)) * grad[d] / mag;

    const double n_up = v > 0.0 ? s.n[li] : (ghost_R ? 0.0 : s.n[ri]);
    const double flux = v * n_up * dt / g.dx[d];
    out[li] -= flux;
    if (!ghost_R) out[ri] += flux;
  };

  auto apply_lower_ghost = [&](int Li, int Lj, int Lk, int d) {
    // Face between the ghost below cell L and L itself.
    const int L[3] = {Li, Lj, Lk};
    const std::size_t li = g.index(L[0], L[1], L[2]);
    Vec3 grad = grad_phi(s, L[0], L[1], L[2]);
    grad[d] = s.k_bg[d];
    Vec3 face_pos = g.center(L[0], L[1], L[2]);
    face_pos[d] -= 0.5 * g.dx[d];
    const double eta = eta_at(idx, face_pos);
    const double mag = std::max(norm(grad), eps_reg);
    const double v = (c / std::sqrt(eta)) * grad[d] / mag;
    // Positive v here means inflow from the ghost (which carries n = 0).
    const double n_up = v > 0.0 ? 0.0 : s.n[li];
    out[li] += v * n_up * dt / g.dx[d];
  };

  for (int d = 0; d < 3; ++d) {
    if (g.n[d] == 1) continue;
    for (int k = 0; k < g.n[2]; ++k)
      for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
          const int c3[3] = {i, j, k};
          const bool last = c3[d] == g.n[d] - 1;
          if (g.bc[d] == Boundary::Periodic) {
            apply_face(i, j, k, d, false);
          } else {
            if (!last) apply_face(i, j, k, d, false);
            if (last) apply_face(i, j, k, d, true);
            if (c3[d] == 0) apply_lower_ghost(i, j, k, d);
          }
        }
  }
  s.n.swap(out);
}

EnergyFields energy_quantities(const PhotonGridState& s, const IndexField& idx, double omega,
                               double hbar, double c) {
  const GridSpec& g = s.grid;
  EnergyFields out;
  out.w.resize(s.n.size());
  out.Y.resize(s.n.size());
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t ci = g.index(i, j, k);
        const double eta = eta_at(idx, g.center(i, j, k));
        out.w[ci] = s.n[ci] * hbar * omega;
        out.Y[ci] = s.n[ci] * (c * c / eta) * hbar * grad_phi(s, i, j, k);
      }
  return out;
}

std::vector<MonitorRow> evolve(PhotonGridState& s, const IndexField& idx, double c,
                               const EvolveConfig& cfg) {
  s.validate();
  const double vol = s.grid.cell_volume();
  auto total = [&] {
    double t = 0.0;
    for (double v : s.n) t += v;
    return t * vol;
  };

  std::vector<MonitorRow> rows;
  double prev_total = total();
  rows.push_back({0, 0.0, prev_total, functional_hamiltonian(s, idx, c), 0.0});

  for (int step = 1; step <= cfg.steps; ++step) {
    if (cfg.strang) {
      step_phase(s, idx, cfg.dt / 2, c);
      step_density(s, idx, cfg.dt, c, cfg.eps_reg);
      step_phase(s, idx, cfg.dt / 2, c);
    } else {
      step_phase(s, idx, cfg.dt, c);
      step_density(s, idx, cfg.dt, c, cfg.eps_reg);
    }
    if (step % cfg.monitor_every == 0 || step == cfg.steps) {
      const double tn = total();
      rows.push_back({step, step * cfg.dt, tn, functional_hamiltonian(s, idx, c),
                      cfg.hbar * cfg.omega * (tn - prev_total) / cfg.dt});
      prev_total = tn;
    }
  }
  return rows;
}

double ray_hamiltonian(const RayState& r, const IndexField& idx, double c) {
  return c * norm(r.p) / std::sqrt(eta_at(idx, r.q));
}

std::pair<Vec3, Vec3> ray_rhs(const RayState& r, const IndexField& idx, double c) {
  const double pn = norm(r.p);
  if (pn == 0.0) throw ZeroMomentum();
  const double eta = eta_at(idx, r.q);
  const Vec3 qdot = (c / std::sqrt(eta) / pn) * r.p;
  const double h = c * pn / std::sqrt(eta);
  const Vec3 pdot = (h / (2.0 * eta)) * idx.grad_eta(r.q);
  return {qdot, pdot};
}

std::vector<RayPathSample> trace_ray(const RayState& r0, const IndexField& idx, double t_span,
                                     int steps, double c) {
  std::vector<RayPathSample> path;
  path.reserve(steps + 1);
  const double dt = t_span / steps;
  RayState r = r0;
  path.push_back({0.0, r, ray_hamiltonian(r, idx, c)});
  for (int k = 1; k <= steps; ++k) {
    auto [k1q, k1p] = ray_rhs(r, idx, c);
    RayState s2{r.q + (dt / 2) * k1q, r.p + (dt / 2) * k1p};
    auto [k2q, k2p] = ray_rhs(s2, idx, c);
    RayState s3{r.q + (dt / 2) * k2q, r.p + (dt / 2) * k2p};
    auto [k3q, k3p] = ray_rhs(s3, idx, c);
    RayState s4{r.q + dt * k3q, r.p + dt * k3p};
    auto [k4q, k4p] = ray_rhs(s4, idx, c);
    r.q += (dt / 6) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    r.p += (dt / 6) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    path.push_back({k * dt, r, ray_hamiltonian(r, idx, c)});
  }
  return path;
}

namespace {

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ValidationError("grid", "truncated stream");
  return v;
}

constexpr char kMagic[8] = {'P', 'H', 'G', 'R', 'I', 'D', '0', '1'};

}  // namespace

void write_grid(std::ostream& os, const PhotonGridState& s) {
  os.write(kMagic, 8);
  put<std::int32_t>(os, s.grid.dims);
  for (int d = 0; d < 3; ++d) put<std::int32_t>(os, s.grid.n[d]);
  for (int d = 0; d < 3; ++d) put(os, s.grid.dx[d]);
  for (int d = 0; d < 3; ++d) put(os, s.grid.origin[d]);
  for (int d = 0; d < 3; ++d) put<std::int32_t>(os, static_cast<std::int32_t>(s.grid.bc[d]));
  for (int d = 0; d < 3; ++d) put(os, s.k_bg[d]);
  os.write(reinterpret_cast<const char*>(s.n.data()),
           static_cast<std::streamsize>(s.n.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(s.phi.data()),
           static_cast<std::streamsize>(s.phi.size() * sizeof(double)));
}

PhotonGridState read_grid(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw ValidationError("grid.magic", "not a PHGRID01 stream");
  PhotonGridState s;
  s.grid.dims = get<std::int32_t>(is);
  for (int d = 0; d < 3; ++d) s.grid.n[d] = get<std::int32_t>(is);
  for (int d = 0; d < 3; ++d) s.grid.dx[d] = get<double>(is);
  for (int d = 0; d < 3; ++d) s.grid.origin[d] = get<double>(is);
  for (int d = 0; d < 3; ++d) s.grid.bc[d] = static_cast<Boundary>(get<std::int32_t>(is));
  for (int d = 0; d < 3; ++d) s.k_bg[d] = get<double>(is);
  const std::size_t count = s.grid.cell_count();
  s.n.resize(count);
  s.phi.resize(count);
  is.read(reinterpret_cast<char*>(s.n.data()), static_cast<std::streamsize>(count * sizeof(double)));
  is.read(reinterpret_cast<char*>(s.phi.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw ValidationError("grid", "truncated stream");
  s.validate();
  return s;
}

void write_monitor_csv(std::ostream& os, const std::vector<MonitorRow>& rows) {
  os << "step,t,total_n,H,w_balance\n";
  os.precision(17);
  for (const MonitorRow& r : rows)
    os << r.step << ',' << r.t << ',' << r.total_density << ',' << r.hamiltonian << ','
       << r.w_balance << '\n';
}

}  // namespace emforms
