// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_ENERGY_HPP
#define KINKBAND_ENERGY_HPP

#include <functional>

#include <Eigen/Core>

#include "kinkband/kinematics.hpp"
#include "kinkband/mesh.hpp"
#include "kinkband/state.hpp"

namespace kinkband {

/// Constitutive and regularization constants in N-mm-MPa units.
///
///   W(Fe)  = C (|Fe|^p - 2^(p/2) - 2 log det Fe) + D (det Fe - 1)^2 + aniso |Fe m|^2
///   w(g)   = beta (2 + g^2)^(r/2)                      (= beta |F^p|^r)
///   grad   = eps_grad |grad g|^grad_exponent
///   diss   = sigma sqrt(delta^2 + (g1 - g2)^2)
///
/// At quadrature points with det Fe <= det_floor, W is replaced by det_penalty.
struct MaterialParams {
  double C = 600.0;
  double D = 200.0;
  double aniso = 100.0;
  double beta = 0.02;
  double eps_grad = 500.0;
  double sigma = 0.001;
  double p = 4.0;
  double r = 2.0;
  double grad_exponent = 2.0;
  double delta = 1e-5;
  double det_penalty = 1e6;
  double det_floor = 1e-8;

  /// Throws std::invalid_argument whose message starts with the offending
  /// config key (e.g. "material.C").
  void validate() const;

  bool operator==(const MaterialParams&) const = default;
};

struct EnergyBreakdown {
  double elastic = 0.0;
  double hardening = 0.0;
  double slip_gradient = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  int penalty_points = 0;
  double min_det_fe = 0.0;
};

/// Nodal gradient of an assembled energy with respect to (a1, a2, b).
struct NodalGradient {
  Eigen::VectorXd a1;
  Eigen::VectorXd a2;
  Eigen::VectorXd b;
};

// Pointwise densities (MPa).
double elastic_density(const Tensor2& Fe, const MaterialParams& params, const SlipSystem& slip);
/// dW/dFe on the smooth branch, zero on the penalty branch.
Tensor2 elastic_stress(const Tensor2& Fe, const MaterialParams& params, const SlipSystem& slip);
double hardening_density(double gamma, const MaterialParams& params);
double hardening_derivative(double gamma, const MaterialParams& params);
double slip_gradient_density(const Vec2& grad_gamma, const MaterialParams& params);

/// Stored energy of the state (N mm per unit thickness).
EnergyBreakdown total_energy(const State& state, const Mesh2D& mesh, const MaterialParams& params,
                             const SlipSystem& slip);

/// Smoothed dissipation sigma * int sqrt(delta^2 + |g_prev - g|^2) with the
/// element quadrature. With params.delta == 0 this is the plain L1 distance.
double dissipation_increment(const Eigen::VectorXd& gamma_prev, const Eigen::VectorXd& gamma,
                             const Mesh2D& mesh, const MaterialParams& params);

struct Assembly {
  EnergyBreakdown energy;
  double dissipation = 0.0;  ///< zero when no previous slip was given
  double value() const { return energy.total + dissipation; }
};

/// Single pass over all elements. Adds the smoothed dissipation against
/// gamma_prev when it is non-null and fills the nodal gradient when grad is
/// non-null. Summation runs in fixed element order.
Assembly assemble(const State& state, const Eigen::VectorXd* gamma_prev, const Mesh2D& mesh,
                  const MaterialParams& params, const SlipSystem& slip, NodalGradient* grad);

/// The discrete incremental functional H(x) = D^delta(gamma_prev, b) + I(a1, a2, b)
/// over the free coefficients of a DofMap. Prescribed coefficients are taken
/// from the base state.
class IncrementalEnergy {
public:
  IncrementalEnergy(const Mesh2D& mesh, const MaterialParams& params, const SlipSystem& slip,
                    DofMap dofs, State base, Eigen::VectorXd gamma_prev);

  double value(const Eigen::VectorXd& x) const;
  /// Analytic gradient of the smooth branch; penalty points contribute zero.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;
  /// Full assembly at x; writes the packed gradient when grad is non-null.
  Assembly evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const;

  State state_at(const Eigen::VectorXd& x) const;
  Eigen::VectorXd pack(const State& state) const;

  const DofMap& dofs() const { return dofs_; }
  const State& base() const { return base_; }
  const Eigen::VectorXd& gamma_prev() const { return gamma_prev_; }

private:
  const Mesh2D* mesh_;
  MaterialParams params_;
  SlipSystem slip_;
  DofMap dofs_;
  State base_;
  Eigen::VectorXd gamma_prev_;
};

/// Analytic gradient of I + D^delta over the free DOFs of the full DofMap.
Eigen::VectorXd energy_gradient_analytic(const State& state, const Eigen::VectorXd& gamma_prev,
                                         const Mesh2D& mesh, const MaterialParams& params,
                                         const SlipSystem& slip);

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;

/// Forward-difference gradient with perturbation h.
Eigen::VectorXd energy_gradient_fd(const ScalarFunction& objective, const Eigen::VectorXd& x,
                                   double h);

/// Central-difference gradient with perturbation h.
Eigen::VectorXd central_difference_gradient(const ScalarFunction& objective,
                                            const Eigen::VectorXd& x, double h);

}  // namespace kinkband

#endif  // KINKBAND_ENERGY_HPP
