#pragma once

#include "vwl/evolution.hpp"
#include "vwl/experiments.hpp"
#include "vwl/fields.hpp"
#include "vwl/group_geometry.hpp"
#include "vwl/mollifier.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vwl {

/// Syntax or semantic error in a run configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialConfig {
  /// delta | delta_squared | zero | constant | gaussian_well | bump_well
  std::string kind = "delta";
  double amplitude = 1.0;
  double width = 1.0;
  /// Add the e^{-1/eps} shift (p~_eps).
  bool shifted = false;
  friend bool operator==(const PotentialConfig&, const PotentialConfig&) = default;
};

struct MollifierConfig {
  /// polynomial | gaussian
  std::string profile = "polynomial";
  int exponent = 4;
  double width = 0.35;
  /// Support radius; 2 keeps eps >= 0.08 resolvable on the default 1024-point box.
  double radius = 2.0;
  friend bool operator==(const MollifierConfig&, const MollifierConfig&) = default;
};

struct InitialConfig {
  /// gaussian | delta | mode | random
  std::string kind = "gaussian";
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;
  int mode = 1;
  bool mollify = false;
  friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct EmbeddingConfig {
  double a = 0.0;
  double b = 0.25;
  double q_tilde = 2.0;
  std::optional<double> q0;
  std::vector<double> widths{0.5, 1.0, 2.0};
  std::vector<int> modes{1, 3};
  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

struct SpectrumConfig {
  std::string preset = "heisenberg:1";
  std::size_t count = 5;
  double lambda = 1.0;
  double mu = 0.0;
  std::size_t basis_size = 256;
  friend bool operator==(const SpectrumConfig&, const SpectrumConfig&) = default;
};

/// Everything a CLI run needs. JSON is the only interchange format.
struct RunConfig {
  std::string group = "abelian:1";
  std::vector<std::size_t> points{1024};
  std::vector<double> extents{40.0};
  double s = 1.0;
  double nu = 2.0;
  PotentialConfig potential;
  MollifierConfig mollifier;
  InitialConfig initial;
  double dt = 1e-3;
  double T = 1.0;
  std::string scheme = "strang";
  std::size_t record_every = 1;
  double wrap_mass_threshold = 1e-8;
  /// eps for single runs (`solve`).
  double eps = 0.1;
  EpsilonNet epsilon;
  /// uniqueness perturbation: constant_shift | initial_data
  std::string perturbation = "constant_shift";
  /// apriori estimate: prop1 | prop2
  std::string estimate = "prop1";
  double c_max = 10.0;
  EmbeddingConfig embedding;
  SpectrumConfig spectrum;
  /// mollifier-scaling norm exponent; infinity = sup.
  double norm_q = std::numeric_limits<double>::infinity();
  std::string output = "out";
  std::uint64_t seed = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  GroupStructure group_structure() const;
  Grid grid() const;
  SolverConfig solver() const;
  Mollifier make_mollifier() const;
  /// Nonnegative classical potential field (for apriori/consistency).
  Field classical_potential(const Grid& grid) const;
  PotentialNet potential_net(const Grid& grid) const;
  Field initial_field(const Grid& grid) const;
  InitialData initial_data(const Grid& grid) const;
};

/// Parses JSON text; defaults fill absent keys. Throws ConfigError with line and
/// column for syntax errors and with the offending field for semantic ones.
RunConfig parse_config(std::string_view text);
/// Complete JSON form (every field present).
nlohmann::json serialize_config(const RunConfig& c);

}  // namespace vwl
