#pragma once

// Seeded random inputs for property checks. Every sample is addressed by
// (seed, index) so batches can be split or reordered without changing values.

#include <cstdint>
#include <random>

#include "subjet/lagrangian.hpp"
#include "subjet/nambu_goto.hpp"

namespace subjet {

class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  double uniform(double lo, double hi);
  Vec uniform_vector(std::size_t n, double lo, double hi);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Box from which states are drawn.
struct StateBox {
  double q_lo = -1.0, q_hi = 1.0;
  double v0_lo = 1.0, v0_hi = 2.0;    // timelike component
  double vi_lo = -0.5, vi_hi = 0.5;   // remaining components
  double a_lo = -1.0, a_hi = 1.0;     // accelerations
  double min_G = 0.1;
};

/// Random polynomial perturbation of sum over sorted index tuples, added on top
/// of a base field; coefficients uniform in [-scale, scale], total degree <=
/// max_degree.
SymmetricTensorField random_tensor_field(SampleStream& rng, const SymmetricTensorField& base, double scale,
                                         unsigned max_degree);

/// Random polynomial one-form, coefficients uniform in [-scale, scale].
OneFormField random_one_form(SampleStream& rng, std::size_t dimension, double scale, unsigned max_degree);

Polynomial random_polynomial(SampleStream& rng, std::size_t dimension, double scale, unsigned max_degree);

/// Rejection-samples a state from the box until G > box.min_G.
TrajectoryState random_state(SampleStream& rng, const RelativisticLagrangian& L, const StateBox& box = {});

/// Random second-order worldsheet jet with s det h > min_det.
WorldsheetJet random_worldsheet_jet(SampleStream& rng, const FlatTargetMetric& eta, double min_det = 0.1);

}  // namespace subjet
