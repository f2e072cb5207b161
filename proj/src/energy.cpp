// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kinkband {

namespace {

constexpr double kDim = 2.0;

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(key) + " " + what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void MaterialParams::validate() const {
  require(finite_positive(C), "material.C", "must be > 0");
  require(finite_positive(D), "material.D", "must be > 0");
  require(finite_positive(aniso), "material.aniso", "must be > 0");
  require(std::isfinite(beta) && beta >= 0.0, "material.beta", "must be >= 0");
  require(finite_positive(eps_grad), "material.eps_grad", "must be > 0");
  require(finite_positive(sigma), "material.sigma", "must be > 0");
  require(std::isfinite(p) && p > 2.0, "material.p", "must be > 2");
  require(std::isfinite(r) && r >= 2.0, "material.r", "must be >= 2");
  require(std::isfinite(grad_exponent) && grad_exponent >= 2.0, "material.grad_exponent",
          "must be >= 2");
  require(finite_positive(delta), "material.delta", "must be > 0");
  require(finite_positive(det_penalty), "material.det_penalty", "must be > 0");
  require(finite_positive(det_floor), "material.det_floor", "must be > 0");
}

double elastic_density(const Tensor2& Fe, const MaterialParams& params, const SlipSystem& slip) {
  const double J = Fe.determinant();
  if (!(J > params.det_floor)) return params.det_penalty;
  const double norm2 = Fe.squaredNorm();
  const double neo = std::pow(norm2, 0.5 * params.p) - std::pow(kDim, 0.5 * params.p) - 2.0 * std::log(J);
  const double vol = (J - 1.0) * (J - 1.0);
  const double transverse = (Fe.transpose() * Fe * slip.M).trace();
  return params.C * neo + params.D * vol + params.aniso * transverse;
}

Tensor2 elastic_stress(const Tensor2& Fe, const MaterialParams& params, const SlipSystem& slip) {
  const double J = Fe.determinant();
  if (!(J > params.det_floor)) return Tensor2::Zero();
  const double norm2 = Fe.squaredNorm();
  // cofactor matrix: d(det)/dFe = J Fe^{-T}
  Tensor2 cof;
  cof << Fe(1, 1), -Fe(1, 0), -Fe(0, 1), Fe(0, 0);
  const Tensor2 inv_t = cof / J;
  return params.C * (params.p * std::pow(norm2, 0.5 * params.p - 1.0) * Fe - 2.0 * inv_t) +
         2.0 * params.D * (J - 1.0) * cof + params.aniso * Fe * (slip.M + slip.M.transpose());
}

double hardening_density(double gamma, const MaterialParams& params) {
  return params.beta * std::pow(kDim + gamma * gamma, 0.5 * params.r);
}

double hardening_derivative(double gamma, const MaterialParams& params) {
  return params.beta * params.r * gamma * std::pow(kDim + gamma * gamma, 0.5 * params.r - 1.0);
}

double slip_gradient_density(const Vec2& grad_gamma, const MaterialParams& params) {
  const double n2 = grad_gamma.squaredNorm();
  if (params.grad_exponent == 2.0) return params.eps_grad * n2;
  return params.eps_grad * std::pow(n2, 0.5 * params.grad_exponent);
}

Assembly assemble(const State& state, const Eigen::VectorXd* gamma_prev, const Mesh2D& mesh,
                  const MaterialParams& params, const SlipSystem& slip, NodalGradient* grad) {
  if (!state.matches(mesh)) throw std::invalid_argument("state does not match mesh node count");
  if (gamma_prev && gamma_prev->size() != state.b.size())
    throw std::invalid_argument("previous slip field does not match mesh node count");

  const auto& rule = edge_midpoint_rule();
  const std::size_t nq = rule.points.size();
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  if (grad) {
    grad->a1 = Eigen::VectorXd::Zero(n);
    grad->a2 = Eigen::VectorXd::Zero(n);
    grad->b = Eigen::VectorXd::Zero(n);
  }

  Assembly out;
  EnergyBreakdown& e = out.energy;
  e.min_det_fe = std::numeric_limits<double>::infinity();
  const double eps = params.eps_grad;
  const double alpha = params.grad_exponent;
  const double delta2 = params.delta * params.delta;

  for (std::size_t el = 0; el < mesh.element_count(); ++el) {
    const auto& tri = mesh.triangles[el];
    const auto& g = mesh.basis_gradients[el];
    const double area = mesh.element_area[el];

    Tensor2 F = Tensor2::Zero();
    Vec2 grad_gamma = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
      F.row(0) += state.a1[tri[k]] * g[k].transpose();
      F.row(1) += state.a2[tri[k]] * g[k].transpose();
      grad_gamma += state.b[tri[k]] * g[k];
    }
    const Vec2 Fs = F * slip.s;

    Tensor2 dF = Tensor2::Zero();  // d(energy)/dF accumulated over quadrature points
    std::array<double, 3> db{0.0, 0.0, 0.0};

    for (std::size_t q = 0; q < nq; ++q) {
      const auto& lam = rule.points[q];
      const double wa = rule.weights[q] * area;
      const double gq = lam[0] * state.b[tri[0]] + lam[1] * state.b[tri[1]] + lam[2] * state.b[tri[2]];
      const Tensor2 Fe = F - gq * Fs * slip.m.transpose();
      const double J = Fe.determinant();
      e.min_det_fe = std::min(e.min_det_fe, J);

      double dgamma = 0.0;  // d(density)/d(gamma) at this point
      if (J > params.det_floor) {
        e.elastic += wa * elastic_density(Fe, params, slip);
        if (grad) {
          const Tensor2 S = elastic_stress(Fe, params, slip);
          const Vec2 Sm = S * slip.m;
          dF += wa * (S - gq * Sm * slip.s.transpose());
          dgamma -= Fs.dot(Sm);
        }
      } else {
        e.penalty += wa * params.det_penalty;
        ++e.penalty_points;
      }

      e.hardening += wa * hardening_density(gq, params);
      if (grad) dgamma += hardening_derivative(gq, params);

      if (gamma_prev) {
        const double gp = lam[0] * (*gamma_prev)[tri[0]] + lam[1] * (*gamma_prev)[tri[1]] +
                          lam[2] * (*gamma_prev)[tri[2]];
        const double diff = gq - gp;
        const double root = std::sqrt(delta2 + diff * diff);
        out.dissipation += wa * params.sigma * root;
        if (grad && root > 0.0) dgamma += params.sigma * diff / root;
      }

      if (grad)
        for (int k = 0; k < 3; ++k) db[k] += wa * dgamma * lam[k];
    }

    const double n2 = grad_gamma.squaredNorm();
    e.slip_gradient += area * slip_gradient_density(grad_gamma, params);

    if (grad) {
      Vec2 dgrad = Vec2::Zero();
      if (alpha == 2.0)
        dgrad = 2.0 * eps * grad_gamma;
      else if (n2 > 0.0)
        dgrad = alpha * eps * std::pow(n2, 0.5 * alpha - 1.0) * grad_gamma;
      for (int k = 0; k < 3; ++k) {
        grad->a1[tri[k]] += dF.row(0).dot(g[k]);
        grad->a2[tri[k]] += dF.row(1).dot(g[k]);
        grad->b[tri[k]] += db[k] + area * dgrad.dot(g[k]);
      }
    }
  }
  e.total = e.elastic + e.hardening + e.slip_gradient + e.penalty;
  return out;
}

EnergyBreakdown total_energy(const State& state, const Mesh2D& mesh, const MaterialParams& params,
                             const SlipSystem& slip) {
  return assemble(state, nullptr, mesh, params, slip, nullptr).energy;
}

double dissipation_increment(const Eigen::VectorXd& gamma_prev, const Eigen::VectorXd& gamma,
                             const Mesh2D& mesh, const MaterialParams& params) {
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  if (gamma_prev.size() != n || gamma.size() != n)
    throw std::invalid_argument("slip fields do not match mesh node count");
  const auto& rule = edge_midpoint_rule();
  const double delta2 = params.delta * params.delta;
  double sum = 0.0;
  for (std::size_t el = 0; el < mesh.element_count(); ++el) {
    const auto& tri = mesh.triangles[el];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      double diff = 0.0;
      for (int k = 0; k < 3; ++k) diff += lam[k] * (gamma[tri[k]] - gamma_prev[tri[k]]);
      sum += rule.weights[q] * mesh.element_area[el] * std::sqrt(delta2 + diff * diff);
    }
  }
  return params.sigma * sum;
}

IncrementalEnergy::IncrementalEnergy(const Mesh2D& mesh, const MaterialParams& params,
                                     const SlipSystem& slip, DofMap dofs, State base,
                                     Eigen::VectorXd gamma_prev)
    : mesh_(&mesh),
      params_(params),
      slip_(slip),
      dofs_(std::move(dofs)),
      base_(std::move(base)),
      gamma_prev_(std::move(gamma_prev)) {
  if (!base_.matches(mesh)) throw std::invalid_argument("base state does not match mesh");
  if (gamma_prev_.size() != base_.b.size())
    throw std::invalid_argument("previous slip field does not match mesh");
}

State IncrementalEnergy::state_at(const Eigen::VectorXd& x) const {
  State s = base_;
  dofs_.unpack(x, s.a1, s.a2, s.b);
  return s;
}

Eigen::VectorXd IncrementalEnergy::pack(const State& state) const {
  return dofs_.pack(state.a1, state.a2, state.b);
}

Assembly IncrementalEnergy::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  if (!grad) return assemble(state_at(x), &gamma_prev_, *mesh_, params_, slip_, nullptr);
  NodalGradient ng;
  const Assembly a = assemble(state_at(x), &gamma_prev_, *mesh_, params_, slip_, &ng);
  *grad = dofs_.pack(ng.a1, ng.a2, ng.b);
  return a;
}

double IncrementalEnergy::value(const Eigen::VectorXd& x) const { return evaluate(x).value(); }

double IncrementalEnergy::value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
  return evaluate(x, &grad).value();
}

Eigen::VectorXd IncrementalEnergy::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g;
  value_and_gradient(x, g);
  return g;
}

Eigen::VectorXd energy_gradient_analytic(const State& state, const Eigen::VectorXd& gamma_prev,
                                         const Mesh2D& mesh, const MaterialParams& params,
                                         const SlipSystem& slip) {
  const DofMap dofs(mesh);
  NodalGradient ng;
  assemble(state, &gamma_prev, mesh, params, slip, &ng);
  return dofs.pack(ng.a1, ng.a2, ng.b);
}

Eigen::VectorXd energy_gradient_fd(const ScalarFunction& objective, const Eigen::VectorXd& x,
                                   double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference perturbation must be > 0");
  const double f0 = objective(x);
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    g[i] = (objective(xp) - f0) / h;
    xp[i] = x[i];
  }
  return g;
}

Eigen::VectorXd central_difference_gradient(const ScalarFunction& objective,
                                            const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference perturbation must be > 0");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = objective(xp);
    xp[i] = x[i] - h;
    const double fm = objective(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace kinkband
