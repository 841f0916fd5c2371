#include "lrinv/classical.hpp"

#include <utility>

namespace lrinv {

ClassicalBasis::ClassicalBasis(Closure closed_form, double t_min, double t_max)
    : closed_(std::move(closed_form)), t_min_(t_min), t_max_(t_max) {}

ClassicalBasis::ClassicalBasis(std::shared_ptr<const OdeTable<4>> table, expr::TimeFunction mass)
    : table_(std::move(table)), mass_(std::move(mass)) {
  t_min_ = table_->t_min();
  t_max_ = table_->t_max();
}

BasisSample ClassicalBasis::at(double t) const {
  if (closed_) return closed_(t);
  const auto y = table_->eval(t);
  BasisSample s;
  s.f1 = y[0];
  s.pi1 = y[1];
  s.f2 = y[2];
  s.pi2 = y[3];
  const double m = mass_(t);
  s.df1 = s.pi1 / m;
  s.df2 = s.pi2 / m;
  return s;
}

std::shared_ptr<const ClassicalBasis> solve_basis(const OscillatorModel& model,
                                                  const SolverConfig& cfg) {
  if (model.analytic_basis) return model.analytic_basis;

  const auto& mass = model.mass;
  const auto& omega_sq = model.omega_sq;
  auto rhs = [&mass, &omega_sq](double t, const std::array<double, 4>& y,
                                std::array<double, 4>& dy) {
    const double m = mass(t);
    const double k = m * omega_sq(t);
    dy[0] = y[1] / m;   // f1' = pi1 / M
    dy[1] = -k * y[0];  // pi1' = -M w2 f1
    dy[2] = y[3] / m;
    dy[3] = -k * y[2];
  };
  // f1(t0) = 1, pi1(t0) = 0, f2(t0) = 0, pi2(t0) = 1  =>  W = 1.
  auto table = std::make_shared<const OdeTable<4>>(
      integrate_dopri5<4>(rhs, model.t0, model.t1, {1.0, 0.0, 0.0, 1.0}, cfg));
  return std::make_shared<const ClassicalBasis>(std::move(table), model.mass);
}

}  // namespace lrinv
