#pragma once

#include <optional>
#include <string>

#include "ifp/shock_model.hpp"

namespace ifp {

/// Contents of a model file.
///
///   {
///     "states": ["employed", "unemployed"],
///     "P": [[0.9, 0.1], [0.5, 0.5]],
///     "atoms": { "0,0": [{"p": 1.0, "beta": 0.99, "R": 1.01, "Y": 1.0}], ... },
///     "gamma": 2.0,
///     "g": 0.0016,          (optional; detrending applied on load)
///     "metadata": { ... }   (optional; free-form, ignored by the solver)
///   }
///
/// Atom keys are "z,zhat" with zero-based state indices. Unknown fields at
/// any level are rejected.
struct ModelFile {
  ShockModel model;        ///< detrended when g is present
  ShockModel raw_model;    ///< as written in the file
  double gamma = 1.0;
  std::optional<double> g;
  std::string metadata_json = "{}";
};

/// Throws ModelValidation on malformed input.
ModelFile parse_model_json(const std::string& text);
ModelFile load_model_file(const std::string& path);

/// Serializes a model. `g` is written only when present; metadata must be a
/// JSON object literal.
std::string dump_model_json(const ShockModel& model, double gamma, std::optional<double> g = {},
                            const std::string& metadata_json = "{}");

}  // namespace ifp
