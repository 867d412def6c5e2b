#include "probdae/integrators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace probdae {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 50;
constexpr double kStepConsistencyTol = 1e-8;
// Salt separating the constraint-perturbation stream from the dynamic one.
constexpr std::uint64_t kConstraintStreamSalt = 0x5bd1e995bc3c92ddULL;

struct Scratch {
  Vector fval, res1, res2, du, dmu, rhs_base, r2, xi_proj, eps;
  Vector c, h, tmp_k, tmp_k2, tmp_n, tmp_n2, arg, w, nu, z0;
  Vector f_old, f_new, u_eul;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

int deterministic_order(Method method) {
  switch (method) {
    case Method::implicit_euler:
    case Method::exp_euler:
      return 1;
    case Method::midpoint:
    case Method::exp2:
      return 2;
  }
  return 1;
}

double default_noise_order(Method method) {
  return static_cast<double>(deterministic_order(method));
}

NoiseInjection default_injection(Method method) {
  switch (method) {
    case Method::implicit_euler:
    case Method::midpoint:
      return NoiseInjection::raw;
    case Method::exp_euler:
    case Method::exp2:
      return NoiseInjection::a_projected;
  }
  return NoiseInjection::raw;
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::implicit_euler: return "implicit_euler";
    case Method::midpoint: return "midpoint";
    case Method::exp_euler: return "exp_euler";
    case Method::exp2: return "exp2";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "implicit_euler") return Method::implicit_euler;
  if (name == "midpoint") return Method::midpoint;
  if (name == "exp_euler") return Method::exp_euler;
  if (name == "exp2") return Method::exp2;
  return std::nullopt;
}

std::optional<ExpPath> parse_exp_path(std::string_view name) {
  if (name == "kernel") return ExpPath::kernel;
  if (name == "saddle") return ExpPath::saddle;
  return std::nullopt;
}

std::optional<NoiseInjection> parse_injection(std::string_view name) {
  if (name == "raw") return NoiseInjection::raw;
  if (name == "a_projected") return NoiseInjection::a_projected;
  return std::nullopt;
}

SchemeId make_scheme(Method method) {
  return SchemeId{method, ExpPath::kernel, default_injection(method)};
}

Integrator::Integrator(SemiExplicitDAE problem, KernelDecomposition decomp, SchemeId scheme,
                       double tau)
    : problem_(std::move(problem)), decomp_(std::move(decomp)), scheme_(scheme), tau_(tau) {
  if (!(tau_ > 0.0)) throw std::invalid_argument("Integrator: tau must be positive");

  const bool exponential =
      scheme_.method == Method::exp_euler || scheme_.method == Method::exp2;
  if (exponential && scheme_.injection == NoiseInjection::raw)
    throw std::invalid_argument(
        "Integrator: exponential schemes define the perturbation through the "
        "A-projected saddle problem; raw injection is not available");

  if (!decomp_.elliptic_on_kernel)
    warnings_.push_back("A is not positive definite on ker B (smallest eigenvalue of sym(ZᵀAZ) = " +
                        std::to_string(decomp_.lambda_min_sym_a_ker) + ")");
  if (exponential && scheme_.path == ExpPath::kernel && !decomp_.a_symmetric)
    warnings_.push_back(
        "kernel-path exponential scheme with non-symmetric A: the ‖φ₀‖ ≤ 1 bound is not guaranteed");

  const int n = problem_.n;
  const double alpha = scheme_.method == Method::midpoint ? 0.5 : 1.0;
  if (scheme_.method == Method::implicit_euler || scheme_.method == Method::midpoint) {
    k_matrix_ = Matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        k_matrix_(i, j) = (i == j ? 1.0 : 0.0) + alpha * tau_ * problem_.A(i, j);
    implicit_solver_.emplace(k_matrix_, problem_.B);
    if (scheme_.method == Method::midpoint) {
      k_minus_ = Matrix(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          k_minus_(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * tau_ * problem_.A(i, j);
    }
  } else {
    phis_ = build_phi(decomp_.A_ker, tau_);
  }

  // B⁻g and B⁻ġ on the uniform grid, when T/τ is an integer number of steps.
  const double ratio = problem_.t_end / tau_;
  const double rounded = std::round(ratio);
  if (std::fabs(ratio - rounded) <= 1e-9 * std::max(1.0, rounded) && rounded >= 1.0 &&
      rounded < 1e8) {
    steps_ = static_cast<int>(rounded);
    if (exponential) {
      bg_grid_.resize(static_cast<std::size_t>(steps_) + 1);
      bg_dot_grid_.resize(static_cast<std::size_t>(steps_) + 1);
      Vector gval, x, nu;
      const Vector zero(static_cast<std::size_t>(n), 0.0);
      for (int k = 0; k <= steps_; ++k) {
        const double t = k * tau_;
        problem_.eval_g(t, gval);
        decomp_.saddle_A.solve(zero, gval, x, nu);
        bg_grid_[static_cast<std::size_t>(k)] = x;
        problem_.eval_g_dot(t, gval);
        decomp_.saddle_A.solve(zero, gval, x, nu);
        bg_dot_grid_[static_cast<std::size_t>(k)] = x;
      }
    }
  }
}

Integrator::Integrator(const SemiExplicitDAE& problem, SchemeId scheme, double tau)
    : Integrator(problem, decompose(problem), scheme, tau) {}

const PhiSet& Integrator::phis() const {
  if (!phis_) throw std::logic_error("Integrator: φ-set only exists for exponential schemes");
  return *phis_;
}

int Integrator::grid_index(double t) const {
  if (steps_ < 0) return -1;
  const double ratio = t / tau_;
  const double rounded = std::round(ratio);
  if (std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, std::fabs(rounded))) return -1;
  const int idx = static_cast<int>(rounded);
  return (idx >= 0 && idx <= steps_) ? idx : -1;
}

void Integrator::bg_at(double t, Vector& out) const {
  const int idx = grid_index(t);
  if (idx >= 0 && !bg_grid_.empty()) {
    out = bg_grid_[static_cast<std::size_t>(idx)];
    return;
  }
  Vector gval, nu;
  problem_.eval_g(t, gval);
  const Vector zero(static_cast<std::size_t>(problem_.n), 0.0);
  decomp_.saddle_A.solve(zero, gval, out, nu);
}

void Integrator::bg_dot_at(double t, Vector& out) const {
  const int idx = grid_index(t);
  if (idx >= 0 && !bg_dot_grid_.empty()) {
    out = bg_dot_grid_[static_cast<std::size_t>(idx)];
    return;
  }
  Vector gval, nu;
  problem_.eval_g_dot(t, gval);
  const Vector zero(static_cast<std::size_t>(problem_.n), 0.0);
  decomp_.saddle_A.solve(zero, gval, out, nu);
}

void Integrator::step(double tn, const Vector& un, const Vector* xi, Vector& u_next,
                      Vector* lambda_next) const {
  if (&un == &u_next) throw std::invalid_argument("step: u_next must not alias un");
  switch (scheme_.method) {
    case Method::implicit_euler:
    case Method::midpoint:
      step_implicit(tn, un, xi, nullptr, u_next, lambda_next);
      return;
    case Method::exp_euler:
    case Method::exp2:
      step_exponential(tn, un, xi, u_next);
      if (lambda_next != nullptr) lambda_next->clear();
      return;
  }
}

// Implicit Euler (α = 1) and midpoint (α = 1/2): solve
//   [I + ατA  Bᵀ] [U^{n+1}]   [rhs_base + τ f(·, ·)]
//   [B        0 ] [ μ     ] = [r2                  ]
// with μ = τλ. The nonlinearity is resolved by a Newton iteration whose
// Jacobian starts as the cached linear factorization; when the contraction is
// slow the finite-difference Jacobian of f is folded in and refactored.
void Integrator::step_implicit(double tn, const Vector& un, const Vector* xi,
                               const Vector* eps, Vector& u_next, Vector* lambda_next) const {
  auto& s = scratch();
  const int n = problem_.n;
  const int m = problem_.m;
  const double t1 = tn + tau_;
  const bool midpoint = scheme_.method == Method::midpoint;
  const auto& kr = kernels::active();

  if (eps == nullptr) {
    multiply(problem_.B, un, s.res2);
    problem_.eval_g(tn, s.tmp_n);
    if (kr.max_abs_diff(s.res2.data(), s.tmp_n.data(), s.res2.size()) >
        std::max(kStepConsistencyTol, problem_.consistency_tol))
      throw std::invalid_argument("step: state is inconsistent with the constraint");
  }

  problem_.eval_g(t1, s.r2);
  if (eps != nullptr) axpy(s.r2, 1.0, *eps);

  if (midpoint) {
    multiply(k_minus_, un, s.rhs_base);
  } else {
    s.rhs_base = un;
  }
  if (xi != nullptr) axpy(s.rhs_base, 1.0, *xi);

  Vector& u = u_next;
  if (!problem_.has_f()) {
    implicit_solver_->solve(s.rhs_base, s.r2, u, s.dmu);
    if (lambda_next != nullptr) {
      *lambda_next = s.dmu;
      kr.scal(lambda_next->data(), 1.0 / tau_, lambda_next->size());
    }
    return;
  }

  u = un;
  Vector& mu = s.dmu;
  mu.assign(static_cast<std::size_t>(m), 0.0);
  std::optional<SaddleSolver> refreshed;
  double prev_delta = std::numeric_limits<double>::infinity();
  double last_residual = std::numeric_limits<double>::quiet_NaN();

  auto assemble_residuals = [&](Vector& r1_out, Vector& r2_out) {
    // r1 = K u + Bᵀ μ − rhs_base − τ f(t*, u*)
    if (midpoint) {
      s.tmp_n2 = add_scaled(un, 1.0, u);
      kr.scal(s.tmp_n2.data(), 0.5, s.tmp_n2.size());
      problem_.eval_f(tn + 0.5 * tau_, s.tmp_n2, s.fval);
    } else {
      problem_.eval_f(t1, u, s.fval);
    }
    multiply(k_matrix_, u, r1_out);
    for (int i = 0; i < m; ++i)
      kr.axpy(r1_out.data(), mu[i], problem_.B.row(i), static_cast<std::size_t>(n));
    kr.axpy(r1_out.data(), -1.0, s.rhs_base.data(), static_cast<std::size_t>(n));
    kr.axpy(r1_out.data(), -tau_, s.fval.data(), static_cast<std::size_t>(n));
    multiply(problem_.B, u, r2_out);
    kr.axpy(r2_out.data(), -1.0, s.r2.data(), static_cast<std::size_t>(m));
  };

  auto build_refreshed = [&]() {
    // K − ατ J_f evaluated at the current iterate (midpoint: at the midpoint).
    Matrix jf;
    if (midpoint) {
      s.tmp_n2 = add_scaled(un, 1.0, u);
      kr.scal(s.tmp_n2.data(), 0.5, s.tmp_n2.size());
      eval_f_jacobian(problem_, tn + 0.5 * tau_, s.tmp_n2, jf);
    } else {
      eval_f_jacobian(problem_, t1, u, jf);
    }
    const double coeff = midpoint ? 0.5 * tau_ : tau_;
    Matrix keff = k_matrix_;
    kr.axpy(keff.data(), -coeff, jf.data(), jf.size());
    refreshed.emplace(std::move(keff), problem_.B);
  };

  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    assemble_residuals(s.res1, s.res2);
    last_residual = std::max(norm_inf(s.res1), norm_inf(s.res2));
    kr.scal(s.res1.data(), -1.0, s.res1.size());
    kr.scal(s.res2.data(), -1.0, s.res2.size());
    const SaddleSolver& jac = refreshed ? *refreshed : *implicit_solver_;
    jac.solve(s.res1, s.res2, s.du, s.tmp_n);
    axpy(u, 1.0, s.du);
    axpy(mu, 1.0, s.tmp_n);

    const double delta = norm_inf(s.du);
    if (delta <= kNewtonTol * std::max(1.0, norm_inf(u))) {
      if (lambda_next != nullptr) {
        *lambda_next = mu;
        kr.scal(lambda_next->data(), 1.0 / tau_, lambda_next->size());
      }
      return;
    }
    // Slow contraction means the frozen linear Jacobian is not enough.
    if (iter >= 1 && delta > 0.25 * prev_delta &&
        (!refreshed || (iter % 8 == 7)))
      build_refreshed();
    prev_delta = delta;
  }
  throw std::runtime_error("implicit step: Newton did not converge in " +
                           std::to_string(kNewtonMaxIter) +
                           " iterations (last residual " + std::to_string(last_residual) + ")");
}

void Integrator::step_exponential(double tn, const Vector& un, const Vector* xi,
                                  Vector& u_next) const {
  auto& s = scratch();
  const double t1 = tn + tau_;
  const auto& kr = kernels::active();
  const PhiSet& phi = *phis_;

  multiply(problem_.B, un, s.res2);
  problem_.eval_g(tn, s.tmp_n);
  if (kr.max_abs_diff(s.res2.data(), s.tmp_n.data(), s.res2.size()) >
      std::max(kStepConsistencyTol, problem_.consistency_tol))
    throw std::invalid_argument("step: state is inconsistent with the constraint");

  const bool second_order = scheme_.method == Method::exp2;

  auto exp_euler_step = [&](Vector& out) {
    if (scheme_.path == ExpPath::kernel) {
      // out = B⁻g(t¹) + Z[φ₀ c + τ φ₁ Zᵀ(f(tⁿ, uⁿ) − B⁻ġ(tⁿ))],  c = Zᵀ(uⁿ − B⁻g(tⁿ)).
      bg_at(tn, s.tmp_n);
      s.arg = add_scaled(un, -1.0, s.tmp_n);
      multiply_transposed(decomp_.Z, s.arg, s.c);
      problem_.eval_f(tn, un, s.f_old);
      bg_dot_at(tn, s.tmp_n);
      s.arg = add_scaled(s.f_old, -1.0, s.tmp_n);
      multiply_transposed(decomp_.Z, s.arg, s.h);
      multiply(phi.phi0, s.c, s.tmp_k);
      multiply(phi.phi1, s.h, s.tmp_k2);
      kr.axpy(s.tmp_k.data(), tau_, s.tmp_k2.data(), s.tmp_k.size());
      multiply(decomp_.Z, s.tmp_k, out);
      bg_at(t1, s.tmp_n);
      axpy(out, 1.0, s.tmp_n);
    } else {
      // Stationary subsystems: w from A w + Bᵀν = f − B⁻ġ, B w = 0; then the
      // homogeneous flow z(t¹) = Z φ₀ Zᵀ z(tⁿ) from z(tⁿ) = uⁿ − B⁻g(tⁿ) − w.
      problem_.eval_f(tn, un, s.f_old);
      bg_dot_at(tn, s.tmp_n);
      s.arg = add_scaled(s.f_old, -1.0, s.tmp_n);
      decomp_.saddle_A.solve(s.arg, Vector(static_cast<std::size_t>(problem_.m), 0.0), s.w, s.nu);
      bg_at(tn, s.tmp_n);
      s.z0 = add_scaled(un, -1.0, s.tmp_n);
      axpy(s.z0, -1.0, s.w);
      multiply_transposed(decomp_.Z, s.z0, s.c);
      multiply(phi.phi0, s.c, s.tmp_k);
      multiply(decomp_.Z, s.tmp_k, out);
      axpy(out, 1.0, s.w);
      bg_at(t1, s.tmp_n);
      axpy(out, 1.0, s.tmp_n);
    }
  };

  if (!second_order) {
    exp_euler_step(u_next);
    if (xi != nullptr) axpy(u_next, 1.0, *xi);
    return;
  }

  exp_euler_step(s.u_eul);
  problem_.eval_f(tn, un, s.f_old);
  problem_.eval_f(t1, s.u_eul, s.f_new);
  // r = f(t¹, u¹_Eul) − B⁻ġ(t¹) − f(tⁿ, uⁿ) + B⁻ġ(tⁿ)
  s.arg = add_scaled(s.f_new, -1.0, s.f_old);
  bg_dot_at(t1, s.tmp_n);
  axpy(s.arg, -1.0, s.tmp_n);
  bg_dot_at(tn, s.tmp_n);
  axpy(s.arg, 1.0, s.tmp_n);

  if (scheme_.path == ExpPath::kernel) {
    multiply_transposed(decomp_.Z, s.arg, s.h);
    multiply(phi.phi2, s.h, s.tmp_k);
    multiply(decomp_.Z, s.tmp_k, s.tmp_n);
    u_next = s.u_eul;
    axpy(u_next, tau_, s.tmp_n);
  } else {
    const Vector zero_m(static_cast<std::size_t>(problem_.m), 0.0);
    // w̄ from A w̄ + Bᵀν̄ = r, B w̄ = 0; ŵ from A ŵ + Bᵀν̂ = w̄/τ, B ŵ = 0.
    decomp_.saddle_A.solve(s.arg, zero_m, s.w, s.nu);
    s.tmp_n = s.w;
    kr.scal(s.tmp_n.data(), 1.0 / tau_, s.tmp_n.size());
    decomp_.saddle_A.solve(s.tmp_n, zero_m, s.z0, s.nu);  // z0 := ŵ
    multiply_transposed(decomp_.Z, s.z0, s.c);
    multiply(phi.phi0, s.c, s.tmp_k);
    multiply(decomp_.Z, s.tmp_k, u_next);  // z(t¹) from initial value ŵ
    axpy(u_next, -1.0, s.z0);
    axpy(u_next, 1.0, s.w);
    axpy(u_next, 1.0, s.u_eul);
  }
  if (xi != nullptr) axpy(u_next, 1.0, *xi);
}

Trajectory Integrator::integrate(const NoiseSpec& noise, std::int64_t trajectory_index,
                                 const Options& options) const {
  if (steps_ < 0)
    throw std::invalid_argument("integrate: t_end/tau must be an integer step count");
  if (noise.sigma < 0.0) throw std::invalid_argument("integrate: sigma must be >= 0");
  if (!(noise.p > 0.0)) throw std::invalid_argument("integrate: p must be positive");
  const bool exponential =
      scheme_.method == Method::exp_euler || scheme_.method == Method::exp2;
  if (options.perturb_constraint && exponential)
    throw std::invalid_argument(
        "integrate: the constraint-perturbation demo is defined for the saddle-solve schemes "
        "(implicit Euler, midpoint)");

  const int n = problem_.n;
  const int m = problem_.m;
  Trajectory traj;
  traj.times.resize(static_cast<std::size_t>(steps_) + 1);
  traj.states.resize(static_cast<std::size_t>(steps_) + 1);
  const bool keep_lambda = options.record_multipliers && !exponential;
  if (keep_lambda) traj.multipliers.resize(static_cast<std::size_t>(steps_));

  for (int k = 0; k <= steps_; ++k) traj.times[static_cast<std::size_t>(k)] = k * tau_;
  traj.states[0] = problem_.u0;

  // raw: the perturbation enters the dynamic right-hand side of the saddle
  // solve. a_projected: the A-projected vector lies in ker B and is added to
  // the state after the deterministic update, which realizes
  // U^{n+1}_ker = Ψ_τ(tⁿ, Uⁿ_ker) + ξⁿ(τ) exactly; the exponential schemes
  // always use that form.
  const bool post_step_noise =
      exponential || scheme_.injection == NoiseInjection::a_projected;

  // Demo misuse mode: one draw ε ~ N(0, σ²) per trajectory, shifting the
  // constraint data for the whole path; replaces the dynamic perturbation.
  Vector eps;
  if (options.perturb_constraint) {
    eps.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
      eps[static_cast<std::size_t>(j)] =
          noise.sigma * counter_normal(noise.seed ^ kConstraintStreamSalt,
                                       static_cast<std::uint64_t>(trajectory_index), 0,
                                       static_cast<std::uint64_t>(j));
  }

  Vector xi_raw, xi;
  for (int k = 0; k < steps_; ++k) {
    const double tn = k * tau_;
    Vector* lambda = keep_lambda ? &traj.multipliers[static_cast<std::size_t>(k)] : nullptr;
    if (options.perturb_constraint) {
      step_implicit(tn, traj.states[static_cast<std::size_t>(k)], nullptr, &eps,
                    traj.states[static_cast<std::size_t>(k) + 1], lambda);
      continue;
    }

    const Vector* xi_ptr = nullptr;
    if (noise.sigma > 0.0) {
      sample_perturbation(noise, n, tau_, k, trajectory_index, xi_raw);
      if (post_step_noise) {
        project_noise_A(decomp_, xi_raw, xi);
      } else {
        xi = xi_raw;
      }
      xi_ptr = &xi;
    }
    if (exponential) {
      step(tn, traj.states[static_cast<std::size_t>(k)], xi_ptr,
           traj.states[static_cast<std::size_t>(k) + 1], lambda);
    } else {
      step(tn, traj.states[static_cast<std::size_t>(k)], post_step_noise ? nullptr : xi_ptr,
           traj.states[static_cast<std::size_t>(k) + 1], lambda);
      if (post_step_noise && xi_ptr != nullptr)
        axpy(traj.states[static_cast<std::size_t>(k) + 1], 1.0, xi);
    }
  }
  return traj;
}

Trajectory Integrator::integrate_deterministic() const {
  if (steps_ < 0)
    throw std::invalid_argument("integrate: t_end/tau must be an integer step count");
  Trajectory traj;
  traj.times.resize(static_cast<std::size_t>(steps_) + 1);
  traj.states.resize(static_cast<std::size_t>(steps_) + 1);
  const bool exponential =
      scheme_.method == Method::exp_euler || scheme_.method == Method::exp2;
  if (!exponential) traj.multipliers.resize(static_cast<std::size_t>(steps_));
  for (int k = 0; k <= steps_; ++k) traj.times[static_cast<std::size_t>(k)] = k * tau_;
  traj.states[0] = problem_.u0;
  for (int k = 0; k < steps_; ++k) {
    Vector* lambda = exponential ? nullptr : &traj.multipliers[static_cast<std::size_t>(k)];
    step(k * tau_, traj.states[static_cast<std::size_t>(k)], nullptr,
         traj.states[static_cast<std::size_t>(k) + 1], lambda);
  }
  return traj;
}

namespace {

Integrator one_shot(const SemiExplicitDAE& problem, const KernelDecomposition& decomp,
                    Method method, ExpPath path, double tau) {
  SchemeId scheme = make_scheme(method);
  scheme.path = path;
  return Integrator(problem, decomp, scheme, tau);
}

}  // namespace

std::pair<Vector, Vector> step_implicit_euler(const SemiExplicitDAE& problem,
                                              const KernelDecomposition& decomp, double tn,
                                              const Vector& un, double tau, const Vector& xi) {
  const Integrator integ = one_shot(problem, decomp, Method::implicit_euler, ExpPath::kernel, tau);
  Vector u, lambda;
  integ.step(tn, un, xi.empty() ? nullptr : &xi, u, &lambda);
  return {std::move(u), std::move(lambda)};
}

std::pair<Vector, Vector> step_midpoint(const SemiExplicitDAE& problem,
                                        const KernelDecomposition& decomp, double tn,
                                        const Vector& un, double tau, const Vector& xi) {
  const Integrator integ = one_shot(problem, decomp, Method::midpoint, ExpPath::kernel, tau);
  Vector u, lambda;
  integ.step(tn, un, xi.empty() ? nullptr : &xi, u, &lambda);
  return {std::move(u), std::move(lambda)};
}

Vector step_exp_euler(const SemiExplicitDAE& problem, const KernelDecomposition& decomp,
                      double tn, const Vector& un, double tau, const Vector& xi, ExpPath path) {
  const Integrator integ = one_shot(problem, decomp, Method::exp_euler, path, tau);
  Vector u;
  integ.step(tn, un, xi.empty() ? nullptr : &xi, u, nullptr);
  return u;
}

Vector step_exp2(const SemiExplicitDAE& problem, const KernelDecomposition& decomp, double tn,
                 const Vector& un, double tau, const Vector& xi, ExpPath path) {
  const Integrator integ = one_shot(problem, decomp, Method::exp2, path, tau);
  Vector u;
  integ.step(tn, un, xi.empty() ? nullptr : &xi, u, nullptr);
  return u;
}

Trajectory integrate(const SemiExplicitDAE& problem, SchemeId scheme, double tau,
                     const NoiseSpec& noise, std::int64_t trajectory_index) {
  return Integrator(problem, scheme, tau).integrate(noise, trajectory_index);
}

}  // namespace probdae
