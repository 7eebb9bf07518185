#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bsrd/operators.hpp"

namespace bsrd {

enum class JacobianMode { analytic, finite_difference };

struct StepConfig {
  double dt = 1e-3;
  double newton_tol = 1e-12;
  int newton_max_iter = 25;
  double theta = 1.0;
  int max_halvings = 5;
  JacobianMode jacobian = JacobianMode::analytic;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("step config: dt must be > 0");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("step config: newton_tol must be > 0");
    if (newton_max_iter < 1) throw std::invalid_argument("step config: newton_max_iter must be >= 1");
    if (!(theta >= 0.5 && theta <= 1.0)) throw std::invalid_argument("step config: theta must lie in [0.5, 1]");
    if (max_halvings < 0) throw std::invalid_argument("step config: max_halvings must be >= 0");
  }
};

/// Newton did not reach the residual tolerance (or produced a nonpositive state).
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(int iterations, double residual, const std::string& what)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  [[nodiscard]] int iterations() const { return iterations_; }
  [[nodiscard]] double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Theta scheme  w - w_n - dt [theta F(w) + (1 - theta) F(w_n)] = 0  solved by
/// damped Newton. The analytic Jacobian satisfies  m^T (I - dt theta J) = m^T
/// for the mass weights m, so every Newton update conserves the weighted mass
/// to round-off regardless of the residual level.
class TimeStepper {
 public:
  TimeStepper(Problem problem, StepConfig cfg) : problem_(std::move(problem)), cfg_(cfg) {
    cfg_.validate();
    problem_.kinetics.validate();
    problem_.window.validate();
    n_ = problem_.mesh.bulk_count() + problem_.mesh.surface_count();
  }

  [[nodiscard]] const Problem& problem() const { return problem_; }
  [[nodiscard]] const StepConfig& config() const { return cfg_; }
  [[nodiscard]] int last_iterations() const { return last_iterations_; }
  [[nodiscard]] std::size_t total_newton_iterations() const { return total_iterations_; }

  /// One theta step of size dt; throws NonConvergence.
  State step(const State& s, double dt) {
    check_shape(s, problem_.mesh);
    const std::size_t nb = problem_.mesh.bulk_count();
    std::vector<double> w0(n_);
    std::copy(s.u.begin(), s.u.end(), w0.begin());
    std::copy(s.v.begin(), s.v.end(), w0.begin() + static_cast<std::ptrdiff_t>(nb));

    std::vector<double> explicit_part(n_, 0.0);
    if (cfg_.theta < 1.0) {
      evaluate_rhs(w0, problem_, explicit_part);
      for (double& x : explicit_part) x *= dt * (1.0 - cfg_.theta);
    }

    std::vector<double> w = w0, f(n_), r(n_), trial(n_), f_trial(n_), r_trial(n_);
    const double scale = dt * cfg_.theta;
    auto residual = [&](const std::vector<double>& x, const std::vector<double>& fx, std::vector<double>& out) {
      double norm = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        out[i] = x[i] - w0[i] - scale * fx[i] - explicit_part[i];
        norm = std::max(norm, std::abs(out[i]));
      }
      return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
    };

    evaluate_rhs(w, problem_, f);
    double norm = residual(w, f, r);
    int it = 0;
    while (norm > cfg_.newton_tol) {
      if (it == cfg_.newton_max_iter) {
        last_iterations_ = it;
        std::ostringstream msg;
        msg << "Newton did not converge in " << it << " iterations (residual " << norm << ")";
        throw NonConvergence(it, norm, msg.str());
      }
      ++it;
      factorize(w, scale);
      Eigen::Map<const Eigen::VectorXd> rhs(r.data(), static_cast<Eigen::Index>(n_));
      const Eigen::VectorXd delta = lu_.solve(rhs);
      if (lu_.info() != Eigen::Success || !delta.allFinite())
        throw NonConvergence(it, norm, "singular Newton system");

      double lambda = 1.0;
      double trial_norm = std::numeric_limits<double>::infinity();
      for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
        for (std::size_t i = 0; i < n_; ++i) trial[i] = w[i] - lambda * delta[static_cast<Eigen::Index>(i)];
        evaluate_rhs(trial, problem_, f_trial);
        trial_norm = residual(trial, f_trial, r_trial);
        if (trial_norm < (1.0 - 1e-4 * lambda) * norm) break;
      }
      if (!(trial_norm < norm)) {
        last_iterations_ = it;
        std::ostringstream msg;
        msg << "Newton line search stalled at residual " << norm;
        throw NonConvergence(it, norm, msg.str());
      }
      std::swap(w, trial);
      std::swap(f, f_trial);
      std::swap(r, r_trial);
      norm = trial_norm;
    }
    last_iterations_ = it;
    total_iterations_ += static_cast<std::size_t>(it);

    for (double x : w)
      if (!(x > 0.0) || !std::isfinite(x))
        throw NonConvergence(it, norm, "step produced a nonpositive or non-finite state");

    State out;
    out.t = s.t + dt;
    out.u.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(nb));
    out.v.assign(w.begin() + static_cast<std::ptrdiff_t>(nb), w.end());
    return out;
  }

  State step(const State& s) { return step(s, cfg_.dt); }

  /// Step of size dt, splitting into halves on failure up to max_halvings levels deep.
  State advance(const State& s, double dt, int depth = 0) {
    try {
      return step(s, dt);
    } catch (const NonConvergence&) {
      if (depth >= cfg_.max_halvings) throw;
      ++halvings_;
      const State mid = advance(s, 0.5 * dt, depth + 1);
      State end = advance(mid, 0.5 * dt, depth + 1);
      end.t = s.t + dt;
      return end;
    }
  }

  [[nodiscard]] std::size_t halvings() const { return halvings_; }

  /// Dense Jacobian of F, for tests.
  [[nodiscard]] Eigen::MatrixXd rhs_jacobian(const State& s, JacobianMode mode) const {
    std::vector<double> w(s.u);
    w.insert(w.end(), s.v.begin(), s.v.end());
    return mode == JacobianMode::analytic ? analytic_jacobian(w) : fd_jacobian(w);
  }

 private:
  struct TripletSink final : JacobianSink {
    std::vector<Eigen::Triplet<double>>* out;
    double scale;
    void add(std::size_t row, std::size_t col, double value) override {
      out->emplace_back(static_cast<int>(row), static_cast<int>(col), -scale * value);
    }
  };

  struct DenseSink final : JacobianSink {
    Eigen::MatrixXd* m;
    void add(std::size_t row, std::size_t col, double value) override {
      (*m)(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += value;
    }
  };

  Eigen::MatrixXd analytic_jacobian(const std::vector<double>& w) const {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    DenseSink sink;
    sink.m = &jac;
    std::vector<double> f(n_);
    evaluate_rhs(w, problem_, f, &sink);
    return jac;
  }

  Eigen::MatrixXd fd_jacobian(std::vector<double> w) const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd jac(n, n);
    std::vector<double> f0(n_), f1(n_);
    evaluate_rhs(w, problem_, f0);
    for (std::size_t c = 0; c < n_; ++c) {
      const double h = 1e-7 * (1.0 + std::abs(w[c]));
      const double saved = w[c];
      w[c] = saved + h;
      evaluate_rhs(w, problem_, f1);
      w[c] = saved;
      for (std::size_t r = 0; r < n_; ++r)
        jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (f1[r] - f0[r]) / h;
    }
    return jac;
  }

  // Assembles and factorizes I - scale * dF/dw at w.
  void factorize(const std::vector<double>& w, double scale) {
    triplets_.clear();
    for (std::size_t i = 0; i < n_; ++i) triplets_.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    if (cfg_.jacobian == JacobianMode::analytic) {
      TripletSink sink;
      sink.out = &triplets_;
      sink.scale = scale;
      std::vector<double> f(n_);
      evaluate_rhs(w, problem_, f, &sink);
    } else {
      const Eigen::MatrixXd jac = fd_jacobian(w);
      for (Eigen::Index c = 0; c < jac.cols(); ++c)
        for (Eigen::Index r = 0; r < jac.rows(); ++r)
          if (jac(r, c) != 0.0) triplets_.emplace_back(static_cast<int>(r), static_cast<int>(c), -scale * jac(r, c));
      pattern_ready_ = false;
    }
    const auto n = static_cast<Eigen::Index>(n_);
    matrix_.resize(n, n);
    matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
    matrix_.makeCompressed();
    if (!pattern_ready_) {
      lu_.analyzePattern(matrix_);
      pattern_ready_ = cfg_.jacobian == JacobianMode::analytic;
    }
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success) throw NonConvergence(0, 0.0, "Newton matrix factorization failed");
  }

  Problem problem_;
  StepConfig cfg_;
  std::size_t n_ = 0;
  int last_iterations_ = 0;
  std::size_t total_iterations_ = 0;
  std::size_t halvings_ = 0;
  bool pattern_ready_ = false;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// Single theta step with a throwaway stepper.
inline State step(const State& s, const Problem& problem, const StepConfig& cfg) {
  TimeStepper stepper(problem, cfg);
  return stepper.step(s);
}

}  // namespace bsrd
