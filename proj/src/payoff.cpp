#include "gowers/payoff.hpp"

#include <algorithm>

#include "gowers/instances.hpp"
#include "gowers/rng.hpp"

namespace gowers {

DeltaSeq DeltaSeq::constant(int length, Rational value) {
  DeltaSeq d;
  d.values.assign(length, value);
  return d;
}

DeltaSeq DeltaSeq::from_json(const json& j) {
  DeltaSeq d;
  if (!j.is_array() || j.empty()) throw SpecInvalid("delta must be a nonempty array of rational strings");
  for (const auto& v : j) {
    Rational r = rational_from_json(v);
    if (r <= 0) throw SpecInvalid("delta entries must be positive", {{"value", v}});
    d.values.push_back(r);
  }
  return d;
}

DeltaSeq DeltaSeq::scaled(Rational factor) const {
  DeltaSeq d = *this;
  for (auto& v : d.values) v *= factor;
  return d;
}

Rational DeltaSeq::min() const { return *std::min_element(values.begin(), values.end()); }

Rational DeltaSeq::at(std::size_t n) const { return values[std::min(n, values.size() - 1)]; }

json DeltaSeq::to_json() const {
  json out = json::array();
  for (auto& v : values) out.push_back(format_rational(v));
  return out;
}

Payoff Payoff::complement() const {
  Payoff c = *this;
  c.name = "not(" + name + ")";
  c.existential = !existential;
  auto inner = accepts;
  c.accepts = [inner](const std::vector<PointId>& s) { return !inner(s); };
  return c;
}

json Payoff::describe() const {
  json out{{"name", name}, {"params", params}, {"horizon", horizon}};
  if (delta) out["delta"] = delta->to_json();
  return out;
}

Payoff payoff_from_table(std::string name, int horizon, std::function<bool(const std::vector<PointId>&)> f) {
  Payoff p;
  p.name = std::move(name);
  p.horizon = horizon;
  p.accepts = std::move(f);
  return p;
}

Payoff phi_support_payoff(const SpaceInstance& space) {
  if (space.kind != "Rosendal") throw KindMismatch("PhiSupport needs a Rosendal instance");
  auto coords = space.point_coords;
  Payoff p = payoff_from_table("phi_support", 2, [coords](const std::vector<PointId>& s) {
    const auto& x0 = coords[s[0]];
    const auto& x1 = coords[s[1]];
    int lead = x0[first_nonzero_index(x0)];
    return lead - 1 < first_nonzero_index(x1);
  });
  return p;
}

namespace {

int outcome_index(const json& params, int horizon) {
  int i = params.value("index", 0);
  if (i < 0 || i >= horizon) throw SpecInvalid("payoff index outside the horizon", {{"index", i}});
  return i;
}

}  // namespace

Payoff make_payoff(const SpaceInstance& space, const json& spec, int horizon) {
  if (horizon < 1) throw SpecInvalid("payoff horizon must be positive");
  std::string name;
  json params = json::object();
  if (spec.is_string()) {
    name = spec;
  } else if (spec.is_object() && spec.contains("name")) {
    name = spec["name"];
    params = spec.value("params", json::object());
  } else {
    throw SpecInvalid("payoff must be a name or {\"name\":..., \"params\":...}");
  }
  auto need = [&](int k) {
    if (horizon < k) throw SpecInvalid("payoff '" + name + "' needs horizon >= " + std::to_string(k));
  };
  Payoff p;
  p.name = name;
  p.params = params;
  p.horizon = horizon;
  const auto coords = space.point_coords;
  if (name == "accept_all") {
    p.accepts = [](const std::vector<PointId>&) { return true; };
  } else if (name == "accept_none") {
    p.accepts = [](const std::vector<PointId>&) { return false; };
  } else if (name == "x0_even") {
    p.accepts = [](const std::vector<PointId>& s) { return s[0] % 2 == 0; };
  } else if (name == "y0_odd") {
    need(2);
    p.accepts = [](const std::vector<PointId>& s) { return s[1] % 2 == 1; };
  } else if (name == "all_even") {
    p.accepts = [](const std::vector<PointId>& s) {
      return std::all_of(s.begin(), s.end(), [](PointId x) { return x % 2 == 0; });
    };
  } else if (name == "x0_in") {
    Bits set = bits_from_list(space.num_points(), params.at("set").get<std::vector<int>>());
    int i = outcome_index(params, horizon);
    p.accepts = [set, i](const std::vector<PointId>& s) { return set.test(s[i]); };
  } else if (name == "strictly_increasing") {
    p.accepts = [](const std::vector<PointId>& s) {
      for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] <= s[i - 1]) return false;
      return true;
    };
  } else if (name == "x1_ne_x0") {
    need(2);
    p.accepts = [](const std::vector<PointId>& s) { return s[0] != s[1]; };
  } else if (name == "equal_pair") {
    need(2);
    p.accepts = [](const std::vector<PointId>& s) { return s[0] == s[1]; };
  } else if (name == "first_coord_zero") {
    if (coords.empty() || coords[0].size() < 2) throw KindMismatch("first_coord_zero needs vector points");
    int i = outcome_index(params, horizon);
    p.accepts = [coords, i](const std::vector<PointId>& s) { return coords[s[i]][0] == 0; };
  } else if (name == "first_nonzero_one") {
    Bits A = counterexample_set(space, "FirstCoordOne");
    int i = outcome_index(params, horizon);
    p.accepts = [A, i](const std::vector<PointId>& s) { return A.test(s[i]); };
  } else if (name == "first_last_equal") {
    Bits A = counterexample_set(space, "ProjectiveFirstLast");
    int i = outcome_index(params, horizon);
    p.accepts = [A, i](const std::vector<PointId>& s) { return A.test(s[i]); };
  } else if (name == "phi_support") {
    need(2);
    auto base = phi_support_payoff(space);
    p.accepts = base.accepts;
  } else if (name == "first_coord_nonneg") {
    if (space.point_values.empty()) throw KindMismatch("first_coord_nonneg needs a metric instance");
    int i = outcome_index(params, horizon);
    auto vals = space.point_values;
    p.accepts = [vals, i](const std::vector<PointId>& s) { return vals[s[i]][0] >= 0; };
  } else if (name == "coord_ball") {
    if (!space.has_metric()) throw NoMetric("coord_ball needs a metric instance");
    int i = outcome_index(params, horizon);
    int center = params.at("center").get<int>();
    if (center < 0 || center >= space.num_points()) throw SpecInvalid("coord_ball center out of range");
    Rational radius = rational_from_json(params.at("radius"));
    Bits ball(space.num_points());
    for (PointId x = 0; x < space.num_points(); ++x)
      if (space.dist(x, center) <= radius) ball.set(x);
    p.accepts = [ball, i](const std::vector<PointId>& s) { return ball.test(s[i]); };
  } else if (name == "random_table") {
    std::uint64_t seed = params.value("seed", 0);
    Rational density = rational_from_json(params.value("density", json("1/2")));
    auto threshold = static_cast<std::uint64_t>(
        static_cast<long double>(density.numerator()) / density.denominator() * 18446744073709551615.0L);
    p.accepts = [seed, threshold, density](const std::vector<PointId>& s) {
      if (density >= 1) return true;
      std::uint64_t h = SplitRng::mix(seed + 0x632BE59BD9B4E019ULL);
      for (PointId x : s) h = SplitRng::mix(h ^ (static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL));
      return h < threshold;
    };
  } else {
    throw SpecInvalid("unknown payoff '" + name + "'");
  }
  return p;
}

}  // namespace gowers
