#pragma once

#include <string>
#include <vector>

#include "nvcoil/homogeneity.hpp"

// Deterministic search over named winding parameters, minimizing sigma_pp
// over a target ICD. sweep() is an exhaustive grid; refine() is coordinate
// descent with successive step halving. No randomness anywhere, so identical
// inputs always produce identical results.

namespace nvcoil {

struct ParamSpec {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  double initial = 0.0;
};

struct SearchSpace {
  std::vector<ParamSpec> parameters;
  double objective_extent = 0.25e-3;  // m, ICD half-length of the objective
  IcdSpec grid;
};

struct TracePoint {
  std::vector<double> params;
  double sigma = 0.0;  // percent
};

struct SearchResult {
  std::vector<std::string> param_names;
  std::vector<double> best_params;
  double best_sigma = 0.0;  // percent
  long evaluations = 0;
  long skipped = 0;  // candidates rejected by the bore constraint
  std::vector<TracePoint> trace;
};

/// A catalog geometry with some winding quantities made tunable.
/// Supported parameter names (all in meters):
///   D:    radius, spacing
///   E, F: r_in, dr, z0, pitch
///   F:    nested_offset, outer_z0, outer_pitch
class GeometryTemplate {
 public:
  explicit GeometryTemplate(CatalogId id, CatalogOverrides base = {})
      : id_(id), base_(std::move(base)) {}

  CatalogId id() const { return id_; }

  /// Builds the geometry with the named parameters applied on top of the
  /// base overrides. Unknown names for this catalog id are rejected.
  CoilGeometry instantiate(std::span<const std::string> names,
                           std::span<const double> values) const;

 private:
  CatalogId id_;
  CatalogOverrides base_;
};

void validate(const SearchSpace& space);

/// Exhaustive grid search, `steps_per_axis` points per parameter including
/// both bounds. Throws before evaluating anything if the grid would exceed
/// `budget` evaluations.
SearchResult sweep(const GeometryTemplate& tmpl, const SearchSpace& space,
                   int steps_per_axis, long budget = 100000);

/// Coordinate descent from the initial point. Each cycle tries +/- the
/// current step on every axis, keeping strict improvements (ties broken
/// toward the lexicographically smaller parameter vector); when a full cycle
/// stalls, all steps halve. Stops when every step falls below 1e-3 of its
/// axis range, when a cycle improves by less than `tolerance`, or after
/// `max_cycles` cycles.
SearchResult refine(const GeometryTemplate& tmpl, const SearchSpace& space,
                    double tolerance = 1e-6, int max_cycles = 60);

std::string search_result_to_json(const SearchResult& result);
void write_trace_csv(const SearchResult& result, std::ostream& out);

}  // namespace nvcoil
