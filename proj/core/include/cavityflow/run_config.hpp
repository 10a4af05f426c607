#ifndef CAVITYFLOW_RUN_CONFIG_HPP
#define CAVITYFLOW_RUN_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavityflow/continuation.hpp"
#include "cavityflow/nonlinear.hpp"

namespace cavityflow {

/// Configuration file problem; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GeometryConfig {
  enum class Kind { Square, SemiEllipse, Msh };
  Kind kind = Kind::Square;
  int m = 32;        // for the built-in generators
  std::string path;  // for Kind::Msh
};

struct OutputConfig {
  std::string dir = "out";
  bool vtk = true;
  bool csv_history = true;
  bool csv_profiles = false;
  bool stream_function = true;
  bool vorticity = false;
  bool psi_flip_sign = false;
  int profile_samples = 101;
};

struct SweepSection {
  std::vector<double> sigmas;
  int jobs = 1;
};

struct ContinuationSection {
  ContinuationConfig cfg;
  std::vector<double> schedule;  // empty -> bisection mode
};

/// Parsed experiment description (JSON file with sections geometry /
/// solver / continuation / sweep / output; unknown keys are hard errors).
struct RunConfig {
  GeometryConfig geometry;
  SolverConfig solver;
  std::optional<ContinuationSection> continuation;
  std::optional<SweepSection> sweep;
  OutputConfig output;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig parse_run_config_file(const std::string& path);

const char* to_string(ConvectionForm form);
const char* to_string(Linearization method);

/// Builds the configured mesh (generator or MSH file).
Mesh make_geometry(const GeometryConfig& geometry);

}  // namespace cavityflow

#endif
