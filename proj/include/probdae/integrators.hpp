#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "probdae/noise.hpp"
#include "probdae/phi.hpp"
#include "probdae/saddle.hpp"

namespace probdae {

enum class Method { implicit_euler, midpoint, exp_euler, exp2 };
enum class ExpPath { kernel, saddle };
enum class NoiseInjection { raw, a_projected };

/// Deterministic convergence order q of the scheme.
int deterministic_order(Method method);
/// Default noise order p = q.
double default_noise_order(Method method);
NoiseInjection default_injection(Method method);

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
std::optional<ExpPath> parse_exp_path(std::string_view name);
std::optional<NoiseInjection> parse_injection(std::string_view name);

/// Scheme selector. `path` picks between the kernel-coordinate φ-form and the
/// saddle-point subsystem form of the exponential schemes (they agree to
/// rounding). `injection` controls the Euler/midpoint perturbation: raw puts
/// the Gaussian vector on the dynamic right-hand side of the saddle solve;
/// a_projected adds the A-projected vector (which lies in ker B) to the state
/// after the deterministic update, the strict U^{n+1}_ker = Ψ_τ + ξⁿ form.
/// Exponential schemes always use the projected post-update form.
struct SchemeId {
  Method method = Method::implicit_euler;
  ExpPath path = ExpPath::kernel;
  NoiseInjection injection = NoiseInjection::raw;
};

/// SchemeId with the per-method defaults.
SchemeId make_scheme(Method method);

/// One-step integrator with all per-(problem, scheme, τ) caches: the
/// factorization of the stepping saddle matrix, the φ-set of −τÂ, and the
/// grid values of B⁻g and B⁻ġ. Immutable after construction; safe to share
/// across concurrently running trajectories.
class Integrator {
 public:
  Integrator(SemiExplicitDAE problem, KernelDecomposition decomp, SchemeId scheme, double tau);
  Integrator(const SemiExplicitDAE& problem, SchemeId scheme, double tau);

  struct Options {
    /// Demo misuse mode (implicit schemes only): one draw ε ~ N(0, σ²) per
    /// trajectory perturbs the constraint data g(t^{n+1}) instead of the
    /// dynamic part, so the constraint residual becomes visible.
    bool perturb_constraint = false;
    bool record_multipliers = true;
  };

  /// One step t^n → t^n + τ. `xi` is the pre-assembled perturbation for this
  /// step (nullptr for the deterministic step; exponential schemes expect it
  /// already A-projected). `lambda_next` receives the multiplier for the
  /// implicit schemes when non-null.
  void step(double tn, const Vector& un, const Vector* xi, Vector& u_next,
            Vector* lambda_next) const;

  /// Full trajectory with per-step noise drawn from `noise`; σ = 0 never
  /// touches the generator and reproduces integrate_deterministic() exactly.
  Trajectory integrate(const NoiseSpec& noise, std::int64_t trajectory_index,
                       const Options& options) const;
  Trajectory integrate(const NoiseSpec& noise, std::int64_t trajectory_index) const {
    return integrate(noise, trajectory_index, Options{});
  }
  Trajectory integrate_deterministic() const;

  const SemiExplicitDAE& problem() const { return problem_; }
  const KernelDecomposition& decomposition() const { return decomp_; }
  const SchemeId& scheme() const { return scheme_; }
  double tau() const { return tau_; }
  /// Number of steps; valid when T/τ is an integer, otherwise -1.
  int steps() const { return steps_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const PhiSet& phis() const;

 private:
  struct NewtonCaches;

  void step_implicit(double tn, const Vector& un, const Vector* xi, const Vector* eps,
                     Vector& u_next, Vector* lambda_next) const;
  void step_exponential(double tn, const Vector& un, const Vector* xi,
                        Vector& u_next) const;
  void bg_at(double t, Vector& out) const;
  void bg_dot_at(double t, Vector& out) const;
  int grid_index(double t) const;

  SemiExplicitDAE problem_;
  KernelDecomposition decomp_;
  SchemeId scheme_;
  double tau_ = 0.0;
  int steps_ = -1;

  std::optional<SaddleSolver> implicit_solver_;  // [I+ατA, Bᵀ; B, 0]
  Matrix k_matrix_;                              // I + ατA (α = 1 or 1/2)
  Matrix k_minus_;                               // I − (τ/2)A, midpoint only
  std::optional<PhiSet> phis_;
  std::vector<Vector> bg_grid_;
  std::vector<Vector> bg_dot_grid_;
  std::vector<std::string> warnings_;
};

/// Spec-shaped one-step helpers (each builds the caches; use Integrator for
/// repeated stepping). xi is the raw perturbation vector for the implicit
/// schemes and the A-projected one for the exponential schemes.
std::pair<Vector, Vector> step_implicit_euler(const SemiExplicitDAE& problem,
                                              const KernelDecomposition& decomp, double tn,
                                              const Vector& un, double tau, const Vector& xi);
std::pair<Vector, Vector> step_midpoint(const SemiExplicitDAE& problem,
                                        const KernelDecomposition& decomp, double tn,
                                        const Vector& un, double tau, const Vector& xi);
Vector step_exp_euler(const SemiExplicitDAE& problem, const KernelDecomposition& decomp,
                      double tn, const Vector& un, double tau, const Vector& xi,
                      ExpPath path = ExpPath::kernel);
Vector step_exp2(const SemiExplicitDAE& problem, const KernelDecomposition& decomp, double tn,
                 const Vector& un, double tau, const Vector& xi,
                 ExpPath path = ExpPath::kernel);

/// Convenience driver: decomposes, builds the integrator, runs one trajectory.
Trajectory integrate(const SemiExplicitDAE& problem, SchemeId scheme, double tau,
                     const NoiseSpec& noise, std::int64_t trajectory_index);

}  // namespace probdae
