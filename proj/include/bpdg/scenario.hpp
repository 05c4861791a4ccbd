#pragma once

#include <functional>

#include "bpdg/config.hpp"
#include "bpdg/spatial_operator.hpp"

namespace bpdg {

BandModel make_band(const SimulationConfig& c);
ScatteringParams make_scattering(const SimulationConfig& c);
DopingProfile make_doping(const SimulationConfig& c);
ModelSetup make_setup(const SimulationConfig& c);

// Momentum profile g(p, mu) = exp(-eps(|p_vec - u e_x|) / T) and its normalization
// 2 pi int int g p^2 dp dmu over [0, p_max] x [-1, 1].
std::function<double(double, double)> drifting_maxwellian(const BandModel& band, double T, double u);
double momentum_norm(const std::function<double(double, double)>& g, double p_max);

// Projection of n(x) g(p, mu) / momentum_norm(g).
DgField density_times_profile(std::shared_ptr<const TensorMesh> mesh, int degree, const BandModel& band,
                              const std::function<double(double)>& n, double T, double u);

DgField initial_field(const SimulationConfig& c, const ModelSetup& setup);

}  // namespace bpdg
