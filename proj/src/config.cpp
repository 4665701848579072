#include "vwl/config.hpp"

#include "vwl/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

namespace vwl {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& constraint) {
  throw ConfigError(fmt::format("{}: {}", field, constraint));
}

void require(bool ok, const std::string& field, const std::string& constraint) {
  if (!ok) fail(field, constraint);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where.empty() ? "config" : where, "expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  const std::string path = where.empty() ? key : where + "." + key;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path, fmt::format("wrong type ({})", obj.at(key).type_name()));
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const std::set<std::string> kPotentialKinds{"delta", "delta_squared", "zero", "constant", "gaussian_well", "bump_well"};
const std::set<std::string> kInitialKinds{"gaussian", "delta", "mode", "random"};

void validate(const RunConfig& c) {
  GroupStructure g = GroupStructure::abelian(1);
  try {
    g = GroupStructure::from_preset(c.group);
  } catch (const ArgumentError& e) {
    fail("group", e.what());
  }
  require(!c.points.empty() && c.points.size() == c.extents.size(), "points",
          "points and extents must be non-empty lists of equal length");
  require(c.points.size() == g.topological_dimension(), "points",
          fmt::format("group {} needs {} axes", c.group, g.topological_dimension()));
  try {
    (void)Grid(c.extents, c.points);
  } catch (const ArgumentError& e) {
    fail("points", e.what());
  }
  require(c.s > 0.0, "s", "s > 0");
  require(c.nu > 0.0, "nu", "nu > 0");

  require(kPotentialKinds.contains(c.potential.kind), "potential.kind",
          "one of delta, delta_squared, zero, constant, gaussian_well, bump_well");
  require(c.potential.amplitude >= 0.0, "potential.amplitude", "amplitude >= 0 (potentials are nonnegative)");
  require(c.potential.width > 0.0, "potential.width", "width > 0");

  require(c.mollifier.profile == "polynomial" || c.mollifier.profile == "gaussian", "mollifier.profile",
          "polynomial or gaussian");
  require(c.mollifier.exponent >= 1, "mollifier.exponent", "exponent >= 1");
  require(c.mollifier.width > 0.0, "mollifier.width", "width > 0");
  require(c.mollifier.radius > 0.0, "mollifier.radius", "radius > 0");

  require(kInitialKinds.contains(c.initial.kind), "initial.kind", "one of gaussian, delta, mode, random");
  require(c.initial.width > 0.0, "initial.width", "width > 0");

  require(c.dt > 0.0, "dt", "dt > 0");
  require(c.T >= c.dt, "T", "T >= dt");
  require(c.scheme == "strang" || c.scheme == "lie", "scheme", "strang or lie");
  require(c.record_every >= 1, "record_every", "record_every >= 1");
  require(c.wrap_mass_threshold > 0.0, "wrap_mass_threshold", "wrap_mass_threshold > 0");
  require(c.eps > 0.0 && c.eps <= 1.0, "eps", "epsilon must lie in (0,1]");

  require(c.epsilon.eps0 > 0.0 && c.epsilon.eps0 <= 1.0, "epsilon.eps0", "epsilon must lie in (0,1]");
  require(c.epsilon.ratio > 0.0 && c.epsilon.ratio < 1.0, "epsilon.ratio", "ratio must lie in (0,1)");
  require(c.epsilon.count >= 5, "epsilon.count", "epsilon.count >= 5");

  require(c.perturbation == "constant_shift" || c.perturbation == "initial_data", "perturbation",
          "constant_shift or initial_data");
  require(c.estimate == "prop1" || c.estimate == "prop2", "estimate", "prop1 or prop2");
  if (c.estimate == "prop2") {
    const double Q = to_double(g.homogeneous_dimension());
    require(Q > c.nu * c.s, "estimate",
            fmt::format("prop2 requires the precondition Q > nu s (Q = {}, nu s = {})", Q, c.nu * c.s));
  }
  require(c.c_max > 0.0, "c_max", "c_max > 0");

  require(c.embedding.q_tilde > 1.0, "embedding.q_tilde", "q_tilde > 1");
  require(!c.embedding.widths.empty() || !c.embedding.modes.empty(), "embedding", "empty test family");
  for (double w : c.embedding.widths) require(w > 0.0, "embedding.widths", "widths > 0");

  require(c.spectrum.count >= 1, "spectrum.count", "count >= 1");
  require(c.spectrum.lambda != 0.0, "spectrum.lambda", "lambda != 0 (non-trivial representation)");
  try {
    const auto sg = GroupStructure::from_preset(c.spectrum.preset);
    require(sg.kind() != GroupKind::abelian, "spectrum.preset", "heisenberg:<n> or engel");
    if (sg.kind() == GroupKind::engel)
      require(c.spectrum.basis_size >= 4 * c.spectrum.count, "spectrum.basis_size", "basis_size >= 4*count");
  } catch (const ArgumentError& e) {
    fail("spectrum.preset", e.what());
  }
  require(c.norm_q >= 1.0, "norm", "norm exponent >= 1 or \"sup\"");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError(fmt::format("syntax error at line {}, column {}: {}", line, col, e.what()));
  }
  RunConfig c;
  reject_unknown(j, "",
                 {"group", "points", "extents", "s", "nu", "potential", "mollifier", "initial", "dt", "T", "scheme",
                  "record_every", "wrap_mass_threshold", "eps", "epsilon", "perturbation", "estimate", "c_max",
                  "embedding", "spectrum", "norm", "output", "seed"});
  read(j, "group", "", c.group);
  read(j, "points", "", c.points);
  read(j, "extents", "", c.extents);
  read(j, "s", "", c.s);
  read(j, "nu", "", c.nu);
  if (j.contains("potential")) {
    const auto& p = j["potential"];
    if (p.is_string()) {
      c.potential.kind = p.get<std::string>();
    } else {
      reject_unknown(p, "potential", {"kind", "amplitude", "width", "shifted"});
      read(p, "kind", "potential", c.potential.kind);
      read(p, "amplitude", "potential", c.potential.amplitude);
      read(p, "width", "potential", c.potential.width);
      read(p, "shifted", "potential", c.potential.shifted);
    }
  }
  if (j.contains("mollifier")) {
    const auto& m = j["mollifier"];
    reject_unknown(m, "mollifier", {"profile", "exponent", "width", "radius"});
    read(m, "profile", "mollifier", c.mollifier.profile);
    read(m, "exponent", "mollifier", c.mollifier.exponent);
    read(m, "width", "mollifier", c.mollifier.width);
    read(m, "radius", "mollifier", c.mollifier.radius);
  }
  if (j.contains("initial")) {
    const auto& i = j["initial"];
    if (i.is_string()) {
      c.initial.kind = i.get<std::string>();
    } else {
      reject_unknown(i, "initial", {"kind", "center", "width", "momentum", "mode", "mollify"});
      read(i, "kind", "initial", c.initial.kind);
      read(i, "center", "initial", c.initial.center);
      read(i, "width", "initial", c.initial.width);
      read(i, "momentum", "initial", c.initial.momentum);
      read(i, "mode", "initial", c.initial.mode);
      read(i, "mollify", "initial", c.initial.mollify);
    }
  }
  read(j, "dt", "", c.dt);
  read(j, "T", "", c.T);
  read(j, "scheme", "", c.scheme);
  read(j, "record_every", "", c.record_every);
  read(j, "wrap_mass_threshold", "", c.wrap_mass_threshold);
  read(j, "eps", "", c.eps);
  if (j.contains("epsilon")) {
    const auto& e = j["epsilon"];
    reject_unknown(e, "epsilon", {"eps0", "ratio", "count"});
    read(e, "eps0", "epsilon", c.epsilon.eps0);
    read(e, "ratio", "epsilon", c.epsilon.ratio);
    read(e, "count", "epsilon", c.epsilon.count);
  }
  read(j, "perturbation", "", c.perturbation);
  read(j, "estimate", "", c.estimate);
  read(j, "c_max", "", c.c_max);
  if (j.contains("embedding")) {
    const auto& e = j["embedding"];
    reject_unknown(e, "embedding", {"a", "b", "q_tilde", "q0", "widths", "modes"});
    read(e, "a", "embedding", c.embedding.a);
    read(e, "b", "embedding", c.embedding.b);
    read(e, "q_tilde", "embedding", c.embedding.q_tilde);
    if (e.contains("q0") && !e["q0"].is_null()) {
      double q0 = 0;
      read(e, "q0", "embedding", q0);
      c.embedding.q0 = q0;
    }
    read(e, "widths", "embedding", c.embedding.widths);
    read(e, "modes", "embedding", c.embedding.modes);
  }
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    reject_unknown(s, "spectrum", {"preset", "count", "lambda", "mu", "basis_size"});
    read(s, "preset", "spectrum", c.spectrum.preset);
    read(s, "count", "spectrum", c.spectrum.count);
    read(s, "lambda", "spectrum", c.spectrum.lambda);
    read(s, "mu", "spectrum", c.spectrum.mu);
    read(s, "basis_size", "spectrum", c.spectrum.basis_size);
  }
  if (j.contains("norm")) {
    const auto& n = j["norm"];
    if (n.is_string() && n.get<std::string>() == "sup") {
      c.norm_q = std::numeric_limits<double>::infinity();
    } else if (n.is_number()) {
      c.norm_q = n.get<double>();
    } else {
      fail("norm", "a number >= 1 or \"sup\"");
    }
  }
  read(j, "output", "", c.output);
  read(j, "seed", "", c.seed);
  validate(c);
  return c;
}

json serialize_config(const RunConfig& c) {
  json emb = {{"a", c.embedding.a},         {"b", c.embedding.b},
              {"q_tilde", c.embedding.q_tilde}, {"q0", c.embedding.q0 ? json(*c.embedding.q0) : json(nullptr)},
              {"widths", c.embedding.widths}, {"modes", c.embedding.modes}};
  return {
      {"group", c.group},
      {"points", c.points},
      {"extents", c.extents},
      {"s", c.s},
      {"nu", c.nu},
      {"potential",
       {{"kind", c.potential.kind},
        {"amplitude", c.potential.amplitude},
        {"width", c.potential.width},
        {"shifted", c.potential.shifted}}},
      {"mollifier",
       {{"profile", c.mollifier.profile},
        {"exponent", c.mollifier.exponent},
        {"width", c.mollifier.width},
        {"radius", c.mollifier.radius}}},
      {"initial",
       {{"kind", c.initial.kind},
        {"center", c.initial.center},
        {"width", c.initial.width},
        {"momentum", c.initial.momentum},
        {"mode", c.initial.mode},
        {"mollify", c.initial.mollify}}},
      {"dt", c.dt},
      {"T", c.T},
      {"scheme", c.scheme},
      {"record_every", c.record_every},
      {"wrap_mass_threshold", c.wrap_mass_threshold},
      {"eps", c.eps},
      {"epsilon", {{"eps0", c.epsilon.eps0}, {"ratio", c.epsilon.ratio}, {"count", c.epsilon.count}}},
      {"perturbation", c.perturbation},
      {"estimate", c.estimate},
      {"c_max", c.c_max},
      {"embedding", emb},
      {"spectrum",
       {{"preset", c.spectrum.preset},
        {"count", c.spectrum.count},
        {"lambda", c.spectrum.lambda},
        {"mu", c.spectrum.mu},
        {"basis_size", c.spectrum.basis_size}}},
      {"norm", std::isinf(c.norm_q) ? json("sup") : json(c.norm_q)},
      {"output", c.output},
      {"seed", c.seed},
  };
}

// ---------------------------------------------------------------------------

GroupStructure RunConfig::group_structure() const { return GroupStructure::from_preset(group); }

Grid RunConfig::grid() const { return Grid(extents, points); }

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.dt = dt;
  s.T = T;
  s.scheme = scheme_from_string(scheme);
  s.record_every = record_every;
  s.wrap_mass_threshold = wrap_mass_threshold;
  return s;
}

Mollifier RunConfig::make_mollifier() const {
  BumpProfile profile = PolynomialBump{mollifier.exponent};
  if (mollifier.profile == "gaussian") profile = TruncatedGaussian{mollifier.width};
  return Mollifier(group_structure(), profile, mollifier.radius);
}

Field RunConfig::classical_potential(const Grid& g) const {
  const double amp = potential.amplitude;
  const double w = potential.width;
  if (potential.kind == "zero") return Field(g);
  if (potential.kind == "constant") return Field::constant(g, amp);
  if (potential.kind == "gaussian_well")
    return Field::sample(g, [=](std::span<const double> x) -> cplx {
      double r2 = 0;
      for (double v : x) r2 += v * v;
      return amp * std::exp(-r2 / (2.0 * w * w));
    });
  if (potential.kind == "bump_well")
    return Field::sample(g, [=](std::span<const double> x) -> cplx {
      double r2 = 0;
      for (double v : x) r2 += v * v;
      const double t = r2 / (w * w);
      return t < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
    });
  throw ArgumentError(fmt::format("potential '{}' is singular; it exists only as a net", potential.kind));
}

PotentialNet RunConfig::potential_net(const Grid& g) const {
  const Mollifier m = make_mollifier();
  auto base = [&]() {
    if (potential.kind == "delta") return PotentialNet::delta(m);
    if (potential.kind == "delta_squared") return PotentialNet::delta_squared(m);
    return PotentialNet::mollified(m, classical_potential(g));
  }();
  return potential.shifted ? PotentialNet::constant_shifted(base) : base;
}

Field RunConfig::initial_field(const Grid& g) const {
  if (initial.kind == "random") return random_field(g, seed);
  if (initial.kind == "mode")
    return Field::sample(g, [&](std::span<const double> x) -> cplx {
      return std::polar(1.0, 2.0 * M_PI * initial.mode * x[0] / g.extents()[0]);
    });
  if (initial.kind == "gaussian")
    return Field::sample(g, [&](std::span<const double> x) -> cplx {
      double r2 = 0;
      for (std::size_t a = 0; a < x.size(); ++a) {
        const double d = x[a] - (a == 0 ? initial.center : 0.0);
        r2 += d * d;
      }
      return std::polar(std::exp(-r2 / (2.0 * initial.width * initial.width)), initial.momentum * x[0]);
    });
  throw ArgumentError("initial data 'delta' exists only as a net");
}

InitialData RunConfig::initial_data(const Grid& g) const {
  if (initial.kind == "delta") return InitialData::delta();
  return InitialData::field(initial_field(g), initial.mollify);
}

}  // namespace vwl
