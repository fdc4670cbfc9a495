#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloak/materials.hpp"
#include "cloak/quadrature.hpp"

namespace cloak {

struct AssumptionParams {
  std::function<double(double)> omega1;
  double E1 = 1, E1p = 1, Lambda = 1, E2 = 1;
  // Defaults matched to a layer variant: omega1(eps) = eps^(N-1) for the full
  // cloak layer and sqrt(eps) for the eps^(-1/2) layers; E1 = Lambda0,
  // E1' = lambda0, Lambda = Lambda0, E2 = Lambda0 * L^2 with L the Lipschitz
  // constant of the region distance.
  static AssumptionParams defaults_for(const LossyLayerSpec& spec, const AbcGeometry& geom);
};

struct LayerCheckRow {
  double eps = 0;
  double sup_q1_omega = 0;      // sup Re q * omega1
  double inf_q2_omega = 0;      // inf Im q * omega1
  double sup_sigma = 0;         // largest eigenvalue of sigma
  double sup_scaled_flux = 0;   // sup sigma grad d . grad d / eps^2
  double int_scaled_flux = 0;   // integral of the same over the shell
  double int_abs_q = 0;         // integral of |q| over the shell
  bool q1_ok = false, q2_ok = false, sigma_ok = false, flux_ok = false;
};

struct LayerCheckReport {
  std::string variant, geometry;
  std::vector<LayerCheckRow> rows;
  double flux_integral_slope = 0;  // log-log slope of int_scaled_flux against eps
  double abs_q_slope = 0;
  bool pointwise_flux_ok = false;  // sup bound holds for every eps
  bool integral_flux_ok = false;   // integral form decays
  bool abs_q_decays = false;
  bool pass = false;
  nlohmann::json to_json() const;
};

// Samples the layer built from `spec` on geom.with_radius(eps) for each eps.
// A sequence "decays" when it strictly decreases with eps and its log-log
// slope exceeds 0.25.
LayerCheckReport validate_lossy_layer(const LossyLayerSpec& spec, const AbcGeometry& geom,
                                         const AssumptionParams& params, const std::vector<double>& eps_list,
                                         const ShellQuadOptions& quad = {});

// Least-squares slope of log(values) against log(eps).
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& values);

}  // namespace cloak
