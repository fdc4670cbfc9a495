#include "cloak/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloak/errors.hpp"

namespace cloak {

AssumptionParams AssumptionParams::defaults_for(const LossyLayerSpec& spec, const AbcGeometry& geom) {
  AssumptionParams p;
  const int n = geom.dim();
  if (spec.variant == LayerVariant::FullCloak)
    p.omega1 = [n](double e) { return std::pow(e, n - 1); };
  else
    p.omega1 = [](double e) { return std::sqrt(e); };
  double lip = geom.kind() == GeometryKind::Box ? 1.0 : geom.distance_constants().b;
  p.E1 = spec.Lambda0;
  p.E1p = spec.lambda0;
  p.Lambda = spec.Lambda0;
  p.E2 = spec.Lambda0 * lip * lip;
  return p;
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& values) {
  if (eps.size() != values.size() || eps.size() < 2) throw InvalidInput("slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(eps.size());
  for (size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0 && values[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
    double x = std::log(eps[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

bool decays(const std::vector<double>& eps, const std::vector<double>& v, double& slope) {
  std::vector<size_t> order(eps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return eps[a] > eps[b]; });
  bool monotone = true;
  for (size_t i = 1; i < order.size(); ++i)
    if (!(v[order[i]] < v[order[i - 1]])) monotone = false;
  slope = loglog_slope(eps, v);
  return monotone && slope > 0.25;
}

}  // namespace

LayerCheckReport validate_lossy_layer(const LossyLayerSpec& spec, const AbcGeometry& geom,
                                         const AssumptionParams& params, const std::vector<double>& eps_list,
                                         const ShellQuadOptions& quad) {
  if (eps_list.size() < 2) throw InvalidInput("validator needs at least two eps values");
  LayerCheckReport rep;
  rep.variant = to_string(spec.variant);
  rep.geometry = to_string(geom.kind());
  std::vector<double> fluxes, absq;
  rep.pointwise_flux_ok = true;
  bool rows_ok = true;
  for (double eps : eps_list) {
    LossyLayerSpec s = spec;
    s.eps = eps;
    AbcGeometry g = geom.with_radius(eps);
    MaterialField layer = build_lossy_layer(s, g);
    const double om = params.omega1(eps);
    LayerCheckRow row;
    row.eps = eps;
    row.inf_q2_omega = std::numeric_limits<double>::infinity();
    for (const auto& qp : shell_quadrature(g, eps / 2, eps, quad)) {
      if (!layer.defined_at(qp.x)) continue;
      Medium m = layer(qp.x);
      Eigen::SelfAdjointEigenSolver<Mat> es(m.sigma, Eigen::EigenvaluesOnly);
      Vec gd = g.region_distance_gradient(qp.x);
      double flux = gd.dot(m.sigma * gd) / (eps * eps);
      row.sup_q1_omega = std::max(row.sup_q1_omega, m.q.real() * om);
      row.inf_q2_omega = std::min(row.inf_q2_omega, m.q.imag() * om);
      row.sup_sigma = std::max(row.sup_sigma, es.eigenvalues().maxCoeff());
      row.sup_scaled_flux = std::max(row.sup_scaled_flux, flux);
      row.int_scaled_flux += qp.w * flux;
      row.int_abs_q += qp.w * std::abs(m.q);
    }
    const double tol = 1e-9;
    row.q1_ok = row.sup_q1_omega > 0 && row.sup_q1_omega <= params.E1 * (1 + tol);
    row.q2_ok = row.inf_q2_omega >= params.E1p * (1 - tol);
    row.sigma_ok = row.sup_sigma <= params.Lambda * (1 + tol);
    row.flux_ok = row.sup_scaled_flux <= params.E2 * (1 + tol);
    rows_ok = rows_ok && row.q1_ok && row.q2_ok && row.sigma_ok;
    rep.pointwise_flux_ok = rep.pointwise_flux_ok && row.flux_ok;
    fluxes.push_back(row.int_scaled_flux);
    absq.push_back(row.int_abs_q);
    rep.rows.push_back(row);
  }
  rep.integral_flux_ok = decays(eps_list, fluxes, rep.flux_integral_slope);
  rep.abs_q_decays = decays(eps_list, absq, rep.abs_q_slope);
  rep.pass = rows_ok && (rep.pointwise_flux_ok || rep.integral_flux_ok) && rep.abs_q_decays;
  return rep;
}

nlohmann::json LayerCheckReport::to_json() const {
  nlohmann::json j;
  j["variant"] = variant;
  j["geometry"] = geometry;
  j["pointwise_flux_ok"] = pointwise_flux_ok;
  j["integral_flux_ok"] = integral_flux_ok;
  j["flux_integral_slope"] = flux_integral_slope;
  j["abs_q_decays"] = abs_q_decays;
  j["abs_q_slope"] = abs_q_slope;
  j["pass"] = pass;
  for (const auto& r : rows) {
    j["rows"].push_back({{"eps", r.eps},
                         {"sup_q1_omega", r.sup_q1_omega},
                         {"inf_q2_omega", r.inf_q2_omega},
                         {"sup_sigma", r.sup_sigma},
                         {"sup_scaled_flux", r.sup_scaled_flux},
                         {"int_scaled_flux", r.int_scaled_flux},
                         {"int_abs_q", r.int_abs_q},
                         {"q1_ok", r.q1_ok},
                         {"q2_ok", r.q2_ok},
                         {"sigma_ok", r.sigma_ok},
                         {"flux_ok", r.flux_ok}});
  }
  return j;
}

}  // namespace cloak
