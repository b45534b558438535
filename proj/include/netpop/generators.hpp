#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "netpop/graph.hpp"
#include "netpop/rng.hpp"

namespace netpop {

struct ErdosRenyiSpec {
  double p = 0.1;
};

struct BlockModelSpec {
  std::size_t blocks = 3;
  std::vector<double> membership_probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
  double within_p = 0.16;
  double between_p = 0.075;
};

/// Ring lattice with `lattice_degree` total neighbours per vertex (must be
/// even: half on each side), then single-pass rewiring.
struct SmallWorldSpec {
  std::size_t lattice_degree = 2;
  double rewire_p = 0.2;
};

/// Proximity graph on uniform points in the unit square.
struct GeometricSpec {
  double radius = 0.175;
};

using GeneratorSpec = std::variant<ErdosRenyiSpec, BlockModelSpec, SmallWorldSpec, GeometricSpec>;

/// Throws InvalidSpec when a probability is outside [0,1], K is zero, or
/// membership probabilities do not sum to 1.
void validate(const GeneratorSpec& spec);

/// Short name: "ER", "SBM", "SW" or "RGG".
std::string generator_name(const GeneratorSpec& spec);

/// Parses "ER", "SBM", "SW" or "RGG" into the default parameterisation
/// used in the simulation studies.
GeneratorSpec default_generator(const std::string& name);

LabelledGraph sample_generator(const GeneratorSpec& spec, std::size_t n_vertices, Rng& rng);

}  // namespace netpop
