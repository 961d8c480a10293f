#include <cmath>
#include <vector>

#include "phaseflow/propagator.hpp"

namespace phaseflow {

SeriesResult propagate_series(const DensityField& rho0, const VelocityField& v,
                              double t_final, int order,
                              int quadrature_steps) {
  if (order < 0) throw ConfigError("series: order must be >= 0");
  if (quadrature_steps < 1)
    throw ConfigError("series: quadrature_steps must be >= 1");
  if (!(t_final >= rho0.time))
    throw ConfigError("series: t_final must not precede the field time");

  const Eigen::Index n = rho0.values.size();
  const double dx = rho0.grid.dx();
  const Eigen::ArrayXd centers = rho0.grid.centers();

  SeriesResult out{rho0, {}, false};
  out.density.time = t_final;
  if (order == 0 || t_final == rho0.time) return out;

  // Uniform time grid; each nested integral reuses the previous level's
  // node values (iterated form), so cost is order x nodes x cells.
  const int q_nodes = quadrature_steps + 1;
  const double dtau = (t_final - rho0.time) / quadrature_steps;
  std::vector<Eigen::ArrayXd> vel(q_nodes);
  for (int q = 0; q < q_nodes; ++q)
    vel[q] = v(centers, rho0.time + dtau * q);

  // L_q u = -d/dx (v_q u), centered in the interior, one-sided at the ends.
  const auto apply_l = [&](const Eigen::ArrayXd& u, int q) {
    const Eigen::ArrayXd f = vel[q] * u;
    Eigen::ArrayXd r(n);
    r.segment(1, n - 2) = -(f.tail(n - 2) - f.head(n - 2)) / (2.0 * dx);
    r[0] = -(f[1] - f[0]) / dx;
    r[n - 1] = -(f[n - 1] - f[n - 2]) / dx;
    return r;
  };

  std::vector<Eigen::ArrayXd> level(q_nodes, rho0.values);  // I_0 = rho_0
  std::vector<Eigen::ArrayXd> terms;
  for (int k = 1; k <= order; ++k) {
    std::vector<Eigen::ArrayXd> integrand(q_nodes);
    for (int q = 0; q < q_nodes; ++q) integrand[q] = apply_l(level[q], q);
    level[0].setZero();
    for (int q = 1; q < q_nodes; ++q)
      level[q] = level[q - 1] + (0.5 * dtau) * (integrand[q - 1] + integrand[q]);
    terms.push_back(level[q_nodes - 1]);
    out.term_norms.push_back(std::sqrt(terms.back().square().sum()));
  }

  // Asymptotic-series guard: truncate before the first non-shrinking term.
  size_t keep = terms.size();
  for (size_t k = 1; k < terms.size(); ++k) {
    if (out.term_norms[k] >= out.term_norms[k - 1]) {
      keep = k;
      break;
    }
  }
  Eigen::ArrayXd sum = rho0.values;
  for (size_t k = 0; k < keep; ++k) sum += terms[k];
  out.diverged = keep < terms.size();
  out.density = make_density_field(rho0.grid, t_final, std::move(sum));
  return out;
}

}  // namespace phaseflow
