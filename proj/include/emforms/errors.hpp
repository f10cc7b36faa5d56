#pragma once
#include <stdexcept>
#include <string>

namespace emforms {

// Error taxonomy shared by all modules. Each condition named in an operation
// contract maps to one exception type so tests can assert on the exact failure.

struct NonFinite : std::runtime_error {
  explicit NonFinite(const std::string& what) : std::runtime_error("non-finite value: " + what) {}
};

struct MissingPotential : std::logic_error {
  MissingPotential() : std::logic_error("field has no potential sampler") {}
};

struct SpacelikeMomentum : std::domain_error {
  explicit SpacelikeMomentum(double p0, double p2)
      : std::domain_error("spacelike momentum: p0^2 = " + std::to_string(p0 * p0) +
                          " < p^2 = " + std::to_string(p2)) {}
};

struct BelowShell : std::domain_error {
  BelowShell() : std::domain_error("p0^2 - p^2/eta < 0: below the photon shell") {}
};

struct NonMonotonicTime : std::runtime_error {
  NonMonotonicTime() : std::runtime_error("q0 is not strictly increasing along the trajectory") {}
};

struct StepFailure : std::runtime_error {
  explicit StepFailure(double du)
      : std::runtime_error("adaptive step size underflow: du = " + std::to_string(du)) {}
};

struct NoCharacteristic : std::runtime_error {
  NoCharacteristic() : std::runtime_error("field is not null: no characteristic vector") {}
};

struct DegenerateField : std::domain_error {
  DegenerateField() : std::domain_error("E = B = 0: characteristic vector is unconstrained") {}
};

struct CFLViolation : std::invalid_argument {
  CFLViolation(double dt, double dt_max)
      : std::invalid_argument("dt = " + std::to_string(dt) +
                              " exceeds CFL bound " + std::to_string(dt_max)) {}
};

struct ZeroMomentum : std::domain_error {
  ZeroMomentum() : std::domain_error("ray momentum is zero") {}
};

struct OnString : std::domain_error {
  OnString() : std::domain_error("point lies on the excluded string of the monopole potential") {}
};

struct OriginSingularity : std::domain_error {
  OriginSingularity() : std::domain_error("monopole potential is singular at the origin") {}
};

struct DomainSingularity : std::domain_error {
  explicit DomainSingularity(const std::string& what)
      : std::domain_error("transition phase singular: " + what) {}
};

struct SuperluminalBoost : std::domain_error {
  explicit SuperluminalBoost(double beta2)
      : std::domain_error("|beta| >= 1 (beta^2 = " + std::to_string(beta2) + ")") {}
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int line_, int col_, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + what),
        line(line_), column(col_) {}
};

struct ValidationError : std::runtime_error {
  std::string path;  // dotted path of the offending key, e.g. "particles[0].p"
  ValidationError(std::string path_, const std::string& what)
      : std::runtime_error(path_ + ": " + what), path(std::move(path_)) {}
};

}  // namespace emforms
