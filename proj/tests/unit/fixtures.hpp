#pragma once

#include <string>

#include "gmy/pipeline.hpp"

namespace fixture {

struct Doubling {
  gmy::RunConfig config;
  gmy::MapSpec spec;
  gmy::Analysis analysis;
  gmy::InducedPartition partition;
};

/// Reference doubling run, built once.
inline const Doubling& doubling() {
  static const Doubling d = [] {
    gmy::RunConfig c = gmy::load_config(std::string(GMY_CONFIG_DIR) + "/doubling.json");
    c.n_max = 16;
    gmy::MapSpec spec = gmy::make_map(c);
    gmy::Analysis a = gmy::analyze(c, spec);
    gmy::InducedPartition P = gmy::induce(c, spec, a);
    return Doubling{c, spec, a, P};
  }();
  return d;
}

/// Doubling on [0,1] split into two halves with R = 1, so F = f.
inline gmy::InducedPartition unit_return() {
  gmy::InducedPartition P;
  P.base.Delta = {0, 1};
  P.base.DeltaPrime = {0, 1};
  P.params.sigma = 0.6L;
  for (gmy::Real lo : {0.0L, 0.5L}) {
    gmy::PartitionElement e;
    e.U = {lo, lo + 0.5L};
    e.R = 1;
    e.n = 1;
    e.preball.v_n = e.U;
    P.elements.push_back(e);
  }
  P.n0 = 1;
  P.n_max = 1;
  P.reindex();
  return P;
}

inline gmy::DensityEstimate bumpy(std::size_t bins, std::uint64_t seed) {
  gmy::DensityEstimate nu;
  nu.support = {0, 1};
  nu.role = gmy::DensityRole::NuInduced;
  gmy::Rng rng(seed, 1);
  for (std::size_t i = 0; i < bins; ++i) nu.weights.push_back(rng.uniform_ext() + 0.1L);
  nu.normalize();
  return nu;
}

}  // namespace fixture
