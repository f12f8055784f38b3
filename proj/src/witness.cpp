#include "bohr/witness.hpp"

namespace bohr {

namespace {

const char* kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::Mu0: return "Mu0";
    case WitnessKind::MuEmpty: return "MuEmpty";
    case WitnessKind::MuSubset: return "MuSubset";
  }
  return "?";
}

WitnessKind parse_kind(const std::string& s) {
  if (s == "Mu0") return WitnessKind::Mu0;
  if (s == "MuEmpty") return WitnessKind::MuEmpty;
  if (s == "MuSubset") return WitnessKind::MuSubset;
  throw Error(ErrorCode::Parse, "unknown witness kind '" + s + "'");
}

Int nearest_index(const Rat& target, const Int& m, const Int& lo, const Int& hi) {
  const Rat x = target * m;
  Int below = floor_of(x);
  Int above = below + 1;
  auto clamp = [&](Int v) { return v < lo ? lo : (v > hi ? hi : v); };
  below = clamp(below);
  above = clamp(above);
  const Rat db = abs(Rat(below) - x);
  const Rat da = abs(Rat(above) - x);
  return da < db ? above : below;
}

WitnessAngle from_sequence(std::vector<Int> m, WitnessKind kind, const Subset& A) {
  if (m.empty()) throw Error(ErrorCode::Precondition, "witness needs at least one stage");
  const auto [lo, hi] = default_seed(m.front());
  const std::size_t depth = m.size();
  WitnessAngle w = cantor_angle(m, lo, hi, depth);
  w.kind = kind;
  w.A = A;
  return w;
}

Int delta_of(const Stage& st, const Subset& A) {
  auto it = st.params.Delta.find(A);
  if (it == st.params.Delta.end()) throw Error(ErrorCode::Precondition, "subset " + subset_key(A) + " not in family");
  return it->second;
}

}  // namespace

std::string WitnessAngle::label() const {
  std::string out = kind_name(kind);
  if (kind == WitnessKind::MuSubset) out += subset_key(A);
  return out;
}

std::pair<Rat, Rat> default_seed(const Int& m1) {
  if (m1 < 1) throw Error(ErrorCode::Precondition, "m_1 must be positive");
  Rat half_len = Rat(66, 7) / m1;
  if (half_len > Rat(1, 2)) half_len = Rat(1, 2);
  half_len.canonicalize();
  return {Rat(Rat(1, 2) - half_len), Rat(Rat(1, 2) + half_len)};
}

WitnessAngle cantor_angle(const std::vector<Int>& m, const Rat& seed_lo, const Rat& seed_hi, std::size_t depth) {
  if (depth < 1 || depth > m.size()) throw Error(ErrorCode::Precondition, "depth must lie in [1, |m|]");
  if (!(seed_lo < seed_hi) || seed_lo < 0 || seed_hi > 1) {
    throw Error(ErrorCode::Precondition, "seed interval must be a nonempty subinterval of [0, 1]");
  }
  if (m.front() < 1) throw Error(ErrorCode::Precondition, "m_1 must be positive");
  const std::size_t checked = std::min(depth + 1, m.size());
  for (std::size_t k = 0; k + 1 < checked; ++k) {
    if (!(m[k + 1] > 2 * m[k])) {
      throw Error(ErrorCode::RatioViolation, "m_" + std::to_string(k + 2) + " = " + to_string(m[k + 1]) +
                                                 " is not > 2 m_" + std::to_string(k + 1));
    }
  }

  const Rat target = (seed_lo + seed_hi) / 2;
  Rat lo = seed_lo, hi = seed_hi;
  for (std::size_t k = 0; k < depth; ++k) {
    const Rat radius = k + 1 < depth ? Rat(Rat(2) / m[k + 1]) : Rat(0);
    const Int first = ceil_of((lo + radius) * m[k]);
    const Int last = floor_of((hi - radius) * m[k]);
    if (first > last) {
      throw Error(ErrorCode::EmptyIntersection, "no arc of level " + std::to_string(k + 1) + " fits");
    }
    const Rat centre(nearest_index(target, m[k], first, last), m[k]);
    lo = centre - radius;
    hi = centre + radius;
    lo.canonicalize();
    hi.canonicalize();
  }

  WitnessAngle w;
  w.theta = UAngle(lo);
  w.seed_lo = seed_lo;
  w.seed_hi = seed_hi;
  w.m.assign(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(depth));
  for (std::size_t k = 0; k < depth; ++k) {
    BoundCert c;
    c.k = k + 1;
    c.dist = dist_to_Z(reduce(w.theta, m[k])).value;
    c.bound = k + 1 < m.size() ? Rat(2 * m[k], m[k + 1]) : Rat(0);
    c.bound.canonicalize();
    w.certs.push_back(c);
  }
  return w;
}

WitnessAngle witness_mu0(const SetFamily& family) {
  std::vector<Int> m;
  for (const Stage& st : family.stages) m.push_back(st.H);
  return from_sequence(m, WitnessKind::Mu0, {});
}

WitnessAngle witness_mu_empty(const SetFamily& family) {
  std::vector<Int> m;
  for (const Stage& st : family.stages) m.push_back(st.H * delta_of(st, {}) - 1);
  return from_sequence(m, WitnessKind::MuEmpty, {});
}

WitnessAngle witness_mu_subset(const SetFamily& family, const Subset& A) {
  if (A.empty()) throw Error(ErrorCode::Precondition, "subset witness needs a nonempty A");
  std::vector<Int> m;
  for (const Stage& st : family.stages) {
    const Int base = st.H * delta_of(st, A);
    m.push_back(base - 1);
    m.push_back(base * st.L);
  }
  return from_sequence(m, WitnessKind::MuSubset, A);
}

std::vector<WitnessAngle> all_witnesses(const SetFamily& family) {
  std::vector<WitnessAngle> out{witness_mu0(family), witness_mu_empty(family)};
  for (const Subset& a : all_subsets(family.r - 1)) {
    if (!a.empty()) out.push_back(witness_mu_subset(family, a));
  }
  return out;
}

bool verify_witness(const WitnessAngle& w) {
  const Rat t = w.theta.turns();
  if (t < w.seed_lo || t > w.seed_hi) return false;
  if (w.certs.size() != w.m.size()) return false;
  for (std::size_t k = 0; k < w.m.size(); ++k) {
    const Rat d = dist_to_Z(reduce(w.theta, w.m[k])).value;
    if (d != w.certs[k].dist) return false;
    if (k + 1 < w.m.size()) {
      Rat expected(2 * w.m[k], w.m[k + 1]);
      expected.canonicalize();
      if (w.certs[k].bound != expected) return false;
    }
    if (d > w.certs[k].bound) return false;
  }
  return near_minus_one(w.theta);
}

bool near_minus_one(const UAngle& theta, const Precision& p) {
  return chord_lt(chord_dist(theta, UAngle(Rat(1, 2))), Rat(1), p);
}

Json witness_to_json(const WitnessAngle& w) {
  Json j;
  j["kind"] = kind_name(w.kind);
  j["A"] = subset_key(w.A);
  j["theta"] = w.theta.str();
  j["seed_interval"] = Json::array({to_string(w.seed_lo), to_string(w.seed_hi)});
  Json m = Json::array();
  for (const Int& v : w.m) m.push_back(to_string(v));
  j["m"] = m;
  Json certs = Json::array();
  for (const BoundCert& c : w.certs) {
    certs.push_back(Json{{"k", c.k}, {"dist", to_string(c.dist)}, {"bound", to_string(c.bound)}});
  }
  j["bound_certs"] = certs;
  return j;
}

WitnessAngle witness_from_json(const Json& j) {
  try {
    WitnessAngle w;
    w.kind = parse_kind(j.at("kind").get<std::string>());
    w.A = parse_subset_key(j.at("A").get<std::string>());
    w.theta = UAngle::parse(j.at("theta").get<std::string>());
    w.seed_lo = parse_rational(j.at("seed_interval").at(0).get<std::string>());
    w.seed_hi = parse_rational(j.at("seed_interval").at(1).get<std::string>());
    for (const Json& v : j.at("m")) w.m.push_back(parse_integer(v.get<std::string>()));
    for (const Json& c : j.at("bound_certs")) {
      w.certs.push_back(BoundCert{c.at("k").get<std::size_t>(), parse_rational(c.at("dist").get<std::string>()),
                                  parse_rational(c.at("bound").get<std::string>())});
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed witness: ") + e.what());
  }
}

Json witnesses_to_json(const std::vector<WitnessAngle>& ws) {
  Json arr = Json::array();
  for (const WitnessAngle& w : ws) arr.push_back(witness_to_json(w));
  return Json{{"witnesses", arr}};
}

std::vector<WitnessAngle> witnesses_from_json(const Json& j) {
  std::vector<WitnessAngle> out;
  for (const Json& w : j.at("witnesses")) out.push_back(witness_from_json(w));
  return out;
}

}  // namespace bohr
