#include "nvcoil/optimizer.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <ostream>

#include <json.hpp>

namespace nvcoil {

namespace {

bool applies_to(CatalogId id, const std::string& name) {
  switch (id) {
    case CatalogId::Helmholtz:
      return name == "radius" || name == "spacing";
    case CatalogId::Barrel:
      return name == "r_in" || name == "dr" || name == "z0" || name == "pitch";
    case CatalogId::NestedBarrel:
      return name == "r_in" || name == "dr" || name == "z0" ||
             name == "pitch" || name == "nested_offset" ||
             name == "outer_z0" || name == "outer_pitch";
    default:
      return false;
  }
}

}  // namespace

CoilGeometry GeometryTemplate::instantiate(std::span<const std::string> names,
                                           std::span<const double> values) const {
  if (names.size() != values.size())
    throw std::invalid_argument("GeometryTemplate: name/value length mismatch");
  CatalogOverrides ov = base_;
  BarrelParams inner = ov.barrel.value_or(BarrelParams{});
  bool touched_inner = false, touched_outer = false;
  double outer_z0 = 0.0, outer_pitch = 0.0;

  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& n = names[i];
    const double v = values[i];
    if (!applies_to(id_, n))
      throw std::invalid_argument("parameter '" + n +
                                  "' does not apply to geometry " +
                                  catalog_letter(id_));
    if (n == "radius") ov.loop_radius = v;
    else if (n == "spacing") ov.loop_spacing = v;
    else if (n == "r_in") { inner.r_in = v; touched_inner = true; }
    else if (n == "dr") { inner.dr = v; touched_inner = true; }
    else if (n == "z0") { inner.z0 = v; touched_inner = true; }
    else if (n == "pitch") { inner.pitch = v; touched_inner = true; }
    else if (n == "nested_offset") { inner.nested_offset = v; touched_inner = true; }
    else if (n == "outer_z0") { outer_z0 = v; touched_outer = true; }
    else if (n == "outer_pitch") { outer_pitch = v; touched_outer = true; }
  }
  if (touched_inner) ov.barrel = inner;
  if (touched_outer) {
    BarrelParams outer = ov.outer_barrel.value_or([&] {
      BarrelParams p = inner;
      p.r_in = inner.r_in + inner.nested_offset;
      p.z0 = 0.5e-3;
      p.pitch = 0.5e-3;
      return p;
    }());
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == "outer_z0") outer.z0 = outer_z0;
      if (names[i] == "outer_pitch") outer.pitch = outer_pitch;
    }
    ov.outer_barrel = outer;
  }
  return build_catalog(id_, ov);
}

void validate(const SearchSpace& space) {
  if (space.parameters.empty())
    throw ValidationError("parameters", "need at least one search parameter");
  for (const ParamSpec& p : space.parameters) {
    if (p.name.empty()) throw ValidationError("parameters", "unnamed parameter");
    if (!(p.lower < p.upper))
      throw ValidationError(p.name, "lower bound must be strictly below upper");
    if (!(p.initial >= p.lower) || !(p.initial <= p.upper))
      throw ValidationError(p.name, "initial value must lie within bounds");
  }
  if (!(space.objective_extent > 0.0))
    throw ValidationError("objective_extent", "must be > 0");
  IcdSpec grid = space.grid;
  grid.half_length = space.objective_extent;
  validate(grid);
}

namespace {

struct Objective {
  const GeometryTemplate& tmpl;
  std::vector<std::string> names;
  IcdSpec grid;
  long evaluations = 0;
  long skipped = 0;

  /// sigma_pp of the candidate, or nothing if the bore constraint rejects it.
  std::optional<double> operator()(std::span<const double> values) {
    CoilGeometry g;
    try {
      g = tmpl.instantiate(names, values);
    } catch (const ValidationError&) {
      ++skipped;
      return std::nullopt;
    }
    ++evaluations;
    return sigma_pp(field_magnitudes(g, grid));
  }
};

Objective make_objective(const GeometryTemplate& tmpl, const SearchSpace& space) {
  Objective obj{tmpl, {}, space.grid};
  for (const ParamSpec& p : space.parameters) obj.names.push_back(p.name);
  obj.grid.half_length = space.objective_extent;
  return obj;
}

bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

SearchResult sweep(const GeometryTemplate& tmpl, const SearchSpace& space,
                   int steps_per_axis, long budget) {
  validate(space);
  if (steps_per_axis < 2)
    throw std::invalid_argument("sweep: need at least 2 steps per axis");
  const std::size_t n = space.parameters.size();
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > budget / steps_per_axis + 1) { total = budget + 1; break; }
    total *= steps_per_axis;
  }
  if (total > budget)
    throw std::invalid_argument("sweep: grid of " + std::to_string(total) +
                                " evaluations exceeds budget " +
                                std::to_string(budget));

  Objective obj = make_objective(tmpl, space);
  SearchResult result;
  result.param_names = obj.names;

  std::vector<int> index(n, 0);
  std::vector<double> values(n);
  bool done = false;
  while (!done) {
    for (std::size_t i = 0; i < n; ++i) {
      const ParamSpec& p = space.parameters[i];
      values[i] = p.lower + (p.upper - p.lower) * index[i] / (steps_per_axis - 1);
    }
    if (auto sigma = obj(values)) {
      result.trace.push_back({values, *sigma});
      if (result.trace.size() == 1 || *sigma < result.best_sigma ||
          (*sigma == result.best_sigma && lex_less(values, result.best_params))) {
        result.best_sigma = *sigma;
        result.best_params = values;
      }
    }
    // odometer increment, last axis fastest
    done = true;
    for (std::size_t i = n; i-- > 0;) {
      if (++index[i] < steps_per_axis) { done = false; break; }
      index[i] = 0;
    }
  }
  if (result.trace.empty())
    throw std::runtime_error("sweep: every candidate violated the bore constraint");
  result.evaluations = obj.evaluations;
  result.skipped = obj.skipped;
  return result;
}

SearchResult refine(const GeometryTemplate& tmpl, const SearchSpace& space,
                    double tolerance, int max_cycles) {
  validate(space);
  if (max_cycles < 1)
    throw std::invalid_argument("refine: need at least one cycle");

  Objective obj = make_objective(tmpl, space);
  SearchResult result;
  result.param_names = obj.names;

  const std::size_t n = space.parameters.size();
  std::vector<double> x(n), step(n), range(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = space.parameters[i].initial;
    range[i] = space.parameters[i].upper - space.parameters[i].lower;
    step[i] = range[i] / 4.0;
  }

  auto start = obj(x);
  if (!start)
    throw std::runtime_error("refine: initial point violates the bore constraint");
  double fx = *start;
  result.trace.push_back({x, fx});
  result.best_params = x;
  result.best_sigma = fx;

  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const double before = fx;
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (double dir : {+1.0, -1.0}) {
        std::vector<double> cand = x;
        cand[i] = std::clamp(x[i] + dir * step[i], space.parameters[i].lower,
                             space.parameters[i].upper);
        if (cand[i] == x[i]) continue;
        auto sigma = obj(cand);
        if (!sigma) continue;
        result.trace.push_back({cand, *sigma});
        if (*sigma < fx || (*sigma == fx && lex_less(cand, x))) {
          if (*sigma < fx) improved = true;
          x = cand;
          fx = *sigma;
        }
      }
    }
    result.best_params = x;
    result.best_sigma = fx;
    if (!improved) {
      bool any_left = false;
      for (std::size_t i = 0; i < n; ++i) {
        step[i] /= 2.0;
        if (step[i] >= 1e-3 * range[i]) any_left = true;
      }
      if (!any_left) break;
    } else if (before - fx < tolerance) {
      break;
    }
  }
  result.evaluations = obj.evaluations;
  result.skipped = obj.skipped;
  return result;
}

std::string search_result_to_json(const SearchResult& result) {
  nlohmann::json doc;
  nlohmann::json best = nlohmann::json::object();
  for (std::size_t i = 0; i < result.param_names.size(); ++i)
    best[result.param_names[i]] = result.best_params[i];
  doc["best_params"] = std::move(best);
  doc["best_sigma"] = result.best_sigma;
  doc["evaluations"] = result.evaluations;
  doc["skipped"] = result.skipped;
  return doc.dump(2);
}

void write_trace_csv(const SearchResult& result, std::ostream& out) {
  for (std::size_t i = 0; i < result.param_names.size(); ++i)
    out << result.param_names[i] << ',';
  out << "sigma_pp_percent\n";
  char buf[40];
  for (const TracePoint& point : result.trace) {
    for (double v : point.params) {
      std::snprintf(buf, sizeof(buf), "%.9g,", v);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.9g\n", point.sigma);
    out << buf;
  }
}

}  // namespace nvcoil
