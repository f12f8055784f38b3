#include "bohr/family.hpp"

#include <algorithm>
#include <sstream>

namespace bohr {

namespace {

const Rat kTwoPiUpper(44, 7);

Int pow2(int k) { return Int(1) << k; }

Int gamma_for(const Rat& epsilon2, const Rat& c2, const BuildConfig& cfg) {
  const Int arg = floor_of(c2 / epsilon2) + 1;
  if (arg > cfg.gamma_arg_cap) {
    throw Error(ErrorCode::SizeLimit, "Gamma needs (" + to_string(arg) + "!)^2, beyond cap " +
                                          std::to_string(cfg.gamma_arg_cap));
  }
  const Int f = factorial(arg.get_ui());
  return f * f;
}

Int max_delta_times(const StageParamsR& p) {
  Int best = 0;
  for (const auto& [a, d] : p.Delta) best = std::max(best, Int(d * (p.L * p.Theta + 1)));
  return best;
}

void add(std::vector<std::pair<std::string, std::string>>& rec, const std::string& key, const Int& v) {
  rec.emplace_back(key, to_string(v));
}
void add(std::vector<std::pair<std::string, std::string>>& rec, const std::string& key, const Rat& v) {
  rec.emplace_back(key, to_string(v));
}

// Subset blocks with Delta_big = t Delta_small share elements iff t = 1 mod L
// and the smallest image index t j_min + (t - 1)/L stays within Theta.
bool subset_blocks_overlap(const BlockSpec& a, const BlockSpec& b) {
  const BlockSpec& lo = a.Delta <= b.Delta ? a : b;
  const BlockSpec& hi = a.Delta <= b.Delta ? b : a;
  if (hi.Delta % lo.Delta != 0) return false;
  const Int t = hi.Delta / lo.Delta;
  if ((t - 1) % lo.L != 0) return false;
  const Int j0 = t * hi.j_min + (t - 1) / lo.L;
  return j0 >= lo.j_min && j0 <= lo.Theta && hi.j_min <= hi.Theta;
}

}  // namespace

std::string subset_key(const Subset& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out + "}";
}

Subset parse_subset_key(std::string_view key) {
  if (key.size() < 2 || key.front() != '{' || key.back() != '}') {
    throw Error(ErrorCode::Parse, "bad subset key '" + std::string(key) + "'");
  }
  Subset out;
  std::string body(key.substr(1, key.size() - 2));
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_integer(item).get_si()));
  if (!std::is_sorted(out.begin(), out.end())) throw Error(ErrorCode::Parse, "subset key not sorted");
  return out;
}

std::vector<Subset> all_subsets(int n) {
  std::vector<Subset> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Subset s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i + 1);
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const Subset& x, const Subset& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

const Rat& BuildConfig::c_for(int r) const {
  auto it = c.find(r);
  if (it == c.end()) throw Error(ErrorCode::Precondition, "no c_" + std::to_string(r) + " configured");
  if (it->second <= 0) throw Error(ErrorCode::Precondition, "c_" + std::to_string(r) + " must be positive");
  return it->second;
}

DichotomyParams one_d_constants(const Rat& epsilon, const Int& divisor, const BuildConfig& cfg) {
  if (cfg.track == Track::Empirical) {
    const MinimalConstants mc =
        divisor == 1 ? minimal_constants(epsilon, cfg.grid_denom_max, ResidueRanges::all(), cfg.precision)
                     : constants_with_divisor(epsilon, cfg.grid_denom_max, ResidueRanges::all(), divisor,
                                              cfg.precision);
    return DichotomyParams{epsilon, Int(0), mc.Sigma, mc.Theta, Track::Empirical};
  }
  Rat e = epsilon;
  for (;;) {
    DichotomyParams dp = dichotomy_params(e, cfg.kappa_cap);
    if (dp.Sigma % divisor == 0) return dp;
    e /= 2;
  }
}

StageParams2 stage_params_2(const Rat& epsilon2, const Int& L, const Rat& c2, const BuildConfig& cfg,
                            const Int& divisor) {
  if (epsilon2 <= 0 || epsilon2 >= 2) throw Error(ErrorCode::Precondition, "eps2 must lie in (0, 2)");
  if (L < 1) throw Error(ErrorCode::Precondition, "L must be >= 1");
  if (c2 <= 0) throw Error(ErrorCode::Precondition, "c2 must be positive");
  StageParams2 s;
  s.epsilon2 = epsilon2;
  s.L = L;
  s.Gamma2 = gamma_for(epsilon2, c2, cfg);
  const DichotomyParams inner = one_d_constants(epsilon2 / (2 * s.Gamma2), divisor, cfg);
  s.epsilon1 = inner.epsilon;
  s.Sigma1 = inner.Sigma;
  s.Theta1 = inner.Theta;
  s.Sigma2 = s.Gamma2 * s.Sigma1;
  s.Theta2 = s.Theta1;
  s.delta2 = epsilon2 / (2 * s.Gamma2 * s.Gamma2 * (L * (s.Sigma1 + s.Theta1) + 1));
  s.Q2 = floor_of(c2 / s.delta2) + 1;
  return s;
}

StageParamsR stage_params_general(int r, const Rat& epsilon, const Int& L, const BuildConfig& cfg) {
  if (r < 1) throw Error(ErrorCode::Precondition, "r must be >= 1");
  StageParamsR out;
  out.r = r;
  out.epsilon = epsilon;
  out.L = L;

  if (r == 1) {
    const DichotomyParams dp = one_d_constants(epsilon, Int(1), cfg);
    out.Delta[{}] = dp.Sigma * L;
    out.Theta = dp.Theta;
    out.Q = L * dp.Theta;
    out.delta = 0;
    add(out.record, "kappa", dp.kappa);
    add(out.record, "Sigma", dp.Sigma);
    add(out.record, "Theta", dp.Theta);
    return out;
  }

  const Rat& c2 = cfg.c_for(2);
  if (r == 2) {
    const StageParams2 s = stage_params_2(epsilon, L, c2, cfg);
    out.Delta[{}] = s.Sigma2 * L;
    out.Delta[{1}] = s.Gamma2;
    out.Theta = s.Theta2;
    out.Q = s.Q2;
    out.delta = s.delta2;
    add(out.record, "epsilon2", s.epsilon2);
    add(out.record, "Gamma2", s.Gamma2);
    add(out.record, "epsilon1", s.epsilon1);
    add(out.record, "Sigma1", s.Sigma1);
    add(out.record, "Theta1", s.Theta1);
    add(out.record, "Sigma2", s.Sigma2);
    add(out.record, "delta2", s.delta2);
    add(out.record, "Q2", s.Q2);
    return out;
  }

  const Rat& cr = cfg.c_for(r);
  const StageParamsR prev = stage_params_general(r - 1, epsilon / 2, L, cfg);
  const Int P = max_delta_times(prev);
  Rat eps2 = epsilon / 2 / (2 * P);
  eps2 = std::min(eps2, Rat(prev.delta / 2));
  eps2 = std::min(eps2, Rat(c2 * epsilon / (4 * cr)));
  eps2.canonicalize();

  // Sigma1 must absorb Gamma2 * Delta' for every A' so the result is a chain.
  const Int gamma = gamma_for(eps2, c2, cfg);
  Int divisor = 1;
  for (const auto& [a, d] : prev.Delta) divisor = lcm_of(divisor, Int(gamma * d));
  const StageParams2 s = stage_params_2(eps2, L, c2, cfg, divisor);

  for (const auto& [a, d] : prev.Delta) {
    out.Delta[a] = s.Sigma2 * L * d;
    Subset with = a;
    with.push_back(r - 1);
    out.Delta[with] = s.Gamma2 * d;
  }
  out.delta = s.delta2 / 2;
  out.Theta = std::max(s.Theta2, prev.Theta);
  out.Q = floor_of(cr / out.delta) + 1;

  const std::string inner_prefix = "r" + std::to_string(r - 1) + ".";
  for (const auto& [k, v] : prev.record) out.record.emplace_back(inner_prefix + k, v);
  add(out.record, "epsilon_prev", Rat(epsilon / 2));
  add(out.record, "P", P);
  add(out.record, "epsilon2", s.epsilon2);
  add(out.record, "Gamma2", s.Gamma2);
  add(out.record, "divisor", divisor);
  add(out.record, "epsilon1", s.epsilon1);
  add(out.record, "Sigma1", s.Sigma1);
  add(out.record, "Theta1", s.Theta1);
  add(out.record, "Sigma2", s.Sigma2);
  add(out.record, "delta2", s.delta2);
  add(out.record, "Q2", s.Q2);
  return out;
}

bool is_divisibility_chain(const std::map<Subset, Int>& delta) {
  std::vector<Int> v;
  for (const auto& [a, d] : delta) v.push_back(d);
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] % v[i - 1] != 0) return false;
  }
  return true;
}

const char* block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Zero: return "Zero";
    case BlockKind::Empty: return "Empty";
    case BlockKind::Subset: return "Subset";
  }
  return "?";
}

Int BlockSpec::size() const {
  switch (kind) {
    case BlockKind::Zero: return Q;
    case BlockKind::Empty: return 1;
    case BlockKind::Subset: return Theta >= j_min ? Int(Theta - j_min + 1) : Int(0);
  }
  return 0;
}

Int BlockSpec::element(const Int& index) const {
  switch (kind) {
    case BlockKind::Zero: return H * index + 1;
    case BlockKind::Empty: return H * Delta;
    case BlockKind::Subset: return H * Delta * (L * (j_min + index - 1) + 1);
  }
  return 0;
}

Int BlockSpec::min_element() const { return element(Int(1)); }
Int BlockSpec::max_element() const { return element(size()); }

std::optional<Int> BlockSpec::index_of(const Int& n) const {
  switch (kind) {
    case BlockKind::Zero: {
      const Int m = n - 1;
      if (m < H || m % H != 0) return std::nullopt;
      const Int q = m / H;
      if (q > Q) return std::nullopt;
      return q;
    }
    case BlockKind::Empty:
      if (n == H * Delta) return Int(1);
      return std::nullopt;
    case BlockKind::Subset: {
      const Int step = H * Delta;
      if (n <= 0 || n % step != 0) return std::nullopt;
      const Int m = n / step - 1;
      if (m % L != 0) return std::nullopt;
      const Int j = m / L;
      if (j < j_min || j > Theta) return std::nullopt;
      return j;
    }
  }
  return std::nullopt;
}

std::string BlockSpec::label() const {
  std::string out = "N=" + std::to_string(stage) + " " + block_kind_name(kind);
  if (kind == BlockKind::Subset) out += subset_key(A);
  return out;
}

Int Stage::max_element() const {
  Int best = 0;
  for (const BlockSpec& b : blocks)
    if (b.size() > 0) best = std::max(best, b.max_element());
  return best;
}

Int Stage::min_element() const {
  std::optional<Int> best;
  for (const BlockSpec& b : blocks) {
    if (b.size() == 0) continue;
    const Int m = b.min_element();
    if (!best || m < *best) best = m;
  }
  return best.value_or(Int(0));
}

Int min_L(int r, int N) {
  if (r == 1) return 1;
  return ceil_of(kTwoPiUpper * pow2(N + 2));
}

Int min_H_next(const Stage& prev) {
  Int factor = std::max(prev.params.Q, max_delta_times(prev.params));
  const Int growth = ceil_of(kTwoPiUpper * pow2(prev.N + 2) * prev.H * factor);
  return std::max(growth, Int(prev.max_element() + 1));
}

std::vector<BlockSpec> stage_blocks(int r, const Stage& stage) {
  std::vector<BlockSpec> out;
  BlockSpec zero;
  zero.stage = stage.N;
  zero.kind = BlockKind::Zero;
  zero.H = stage.H;
  zero.L = stage.L;
  zero.Q = stage.params.Q;
  zero.epsilon = stage.epsilon;
  out.push_back(zero);
  for (const Subset& a : all_subsets(r - 1)) {
    BlockSpec b;
    b.stage = stage.N;
    b.kind = a.empty() ? BlockKind::Empty : BlockKind::Subset;
    b.A = a;
    b.H = stage.H;
    b.L = stage.L;
    b.Delta = stage.params.Delta.at(a);
    b.Theta = stage.params.Theta;
    b.epsilon = stage.epsilon;
    out.push_back(b);
  }
  return out;
}

SetFamily build_family(int r, int num_stages, const BuildConfig& cfg, const ScheduleHints& hints) {
  if (num_stages < 1) throw Error(ErrorCode::Precondition, "num_stages must be >= 1");
  if (r < 1) throw Error(ErrorCode::Precondition, "r must be >= 1");
  SetFamily fam;
  fam.r = r;
  fam.track = cfg.track;
  fam.config = cfg;
  for (int N = 1; N <= num_stages; ++N) {
    const std::size_t i = static_cast<std::size_t>(N - 1);
    Stage st;
    st.N = N;
    st.epsilon = i < hints.epsilon.size() ? hints.epsilon[i] : Rat(1, pow2(N));
    st.L = i < hints.L.size() ? hints.L[i] : min_L(r, N);
    st.params = stage_params_general(r, st.epsilon, st.L, cfg);
    if (i < hints.H.size()) {
      st.H = hints.H[i];
    } else {
      st.H = N == 1 ? Int(20) : min_H_next(fam.stages.back());
      if (r == 1 && st.H % 2 != 0) st.H += 1;
    }
    st.blocks = stage_blocks(r, st);
    fam.stages.push_back(std::move(st));
  }
  return fam;
}

std::optional<Membership> contains(const SetFamily& family, const Int& n) {
  for (const Stage& st : family.stages) {
    for (const BlockSpec& b : st.blocks) {
      if (auto idx = b.index_of(n)) return Membership{st.N, b.kind, b.A, *idx};
    }
  }
  return std::nullopt;
}

ScheduleReport schedule_check(const SetFamily& family) {
  ScheduleReport rep;
  auto violate = [&](int N, std::string rule, std::string detail) {
    rep.violations.push_back({N, std::move(rule), std::move(detail)});
  };
  for (std::size_t i = 0; i < family.stages.size(); ++i) {
    const Stage& st = family.stages[i];
    if (st.epsilon <= 0 || st.epsilon >= 2) violate(st.N, "eps_N in (0, 2)", to_string(st.epsilon));
    if (i == 0 && st.H < 20) violate(st.N, "H_1 >= 20", "H_1 = " + to_string(st.H));
    if (family.r >= 2 && st.L < min_L(family.r, st.N)) {
      violate(st.N, "L_N >= (44/7) 2^(N+2)", "L = " + to_string(st.L) + " < " + to_string(min_L(family.r, st.N)));
    }
    if (i > 0) {
      const Stage& prev = family.stages[i - 1];
      if (st.epsilon >= prev.epsilon) violate(st.N, "eps_N decreasing", to_string(st.epsilon));
      const Int factor = std::max(prev.params.Q, max_delta_times(prev.params));
      const Rat growth = kTwoPiUpper * pow2(prev.N + 2) * prev.H * factor;
      if (st.H < growth) {
        violate(st.N, "H_{N+1} >= (44/7) 2^(N+2) H_N max(Q_N, Delta_A (L_N Theta_N + 1))",
                "H = " + to_string(st.H) + " < " + to_string(ceil_of(growth)));
      }
      if (!(prev.max_element() < st.H)) {
        violate(st.N, "max element of stage N < H_{N+1}", "H = " + to_string(st.H));
      }
    }

    for (std::size_t a = 0; a < st.blocks.size(); ++a) {
      for (std::size_t b = a + 1; b < st.blocks.size(); ++b) {
        const BlockSpec& x = st.blocks[a];
        const BlockSpec& y = st.blocks[b];
        bool overlap = false;
        if (x.kind == BlockKind::Zero || y.kind == BlockKind::Zero) {
          const BlockSpec& other = x.kind == BlockKind::Zero ? y : x;
          const BlockSpec& zero = x.kind == BlockKind::Zero ? x : y;
          overlap = zero.H == 1 && zero.size() > 0 && other.size() > 0 &&
                    !(zero.max_element() < other.min_element() || other.max_element() < zero.min_element());
        } else if (x.kind == BlockKind::Empty) {
          overlap = y.index_of(x.element(Int(1))).has_value();
        } else if (y.kind == BlockKind::Empty) {
          overlap = x.index_of(y.element(Int(1))).has_value();
        } else {
          overlap = subset_blocks_overlap(x, y);
        }
        if (overlap) rep.overlaps.push_back(x.label() + " / " + y.label());
      }
    }
  }
  return rep;
}

std::vector<Int> enumerate_block(const BlockSpec& b, const Int& limit) {
  const Int n = b.size();
  if (n > limit) throw Error(ErrorCode::SizeLimit, "block " + b.label() + " has " + to_string(n) + " elements");
  std::vector<Int> out;
  out.reserve(n.get_ui());
  for (Int k = 1; k <= n; ++k) out.push_back(b.element(k));
  return out;
}

BohrUnion::BohrUnion(const std::vector<SetFamily>& families, const std::vector<std::pair<int, Int>>& picks) {
  if (families.size() != picks.size()) throw Error(ErrorCode::Precondition, "one pick per family required");
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto& [N, j_min] = picks[i];
    const SetFamily& fam = families[i];
    if (N < 1 || N > static_cast<int>(fam.stages.size())) {
      throw Error(ErrorCode::Precondition, "stage pick out of range");
    }
    UnionComponent comp{fam.r, N, j_min, fam.stages[static_cast<std::size_t>(N - 1)].blocks};
    for (BlockSpec& b : comp.blocks) {
      if (b.kind != BlockKind::Subset) continue;
      if (j_min < 1 || j_min > b.Theta) throw Error(ErrorCode::Precondition, "j_min must lie in [1, Theta]");
      b.j_min = j_min;
    }
    comps_.push_back(std::move(comp));
  }
  auto range = [](const UnionComponent& c) {
    Stage s;
    s.blocks = c.blocks;
    return std::make_pair(s.min_element(), s.max_element());
  };
  for (std::size_t i = 1; i < comps_.size(); ++i) {
    const auto prev = range(comps_[i - 1]);
    const auto cur = range(comps_[i]);
    if (!(prev.second < cur.first)) {
      throw Error(ErrorCode::Overlap, "component " + std::to_string(i) + " starts at " + to_string(cur.first) +
                                          ", not above the previous maximum " + to_string(prev.second));
    }
  }
}

std::optional<BohrUnion::Hit> BohrUnion::contains(const Int& n) const {
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    for (const BlockSpec& b : comps_[i].blocks) {
      if (auto idx = b.index_of(n)) return Hit{i, b.kind, b.A, *idx};
    }
  }
  return std::nullopt;
}

std::vector<Int> katznelson_set(const std::vector<UAngle>& thetas, const Rat& delta, const Int& n_max,
                                const Precision& p) {
  if (delta <= 0 || delta >= 1) throw Error(ErrorCode::Precondition, "delta must lie in (0, 1)");
  if (n_max > 10000000) throw Error(ErrorCode::SizeLimit, "n_max too large");
  const UAngle half(Rat(1, 2));
  std::vector<Int> out;
  std::vector<UAngle> cur(thetas.size());
  for (Int n = 0; n <= n_max; ++n) {
    bool hit = false;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (n > 0) cur[i] = cur[i] + thetas[i];
      if (!hit && chord_lt(chord_dist(cur[i], half), delta, p)) hit = true;
    }
    if (hit) out.push_back(n);
  }
  return out;
}

}  // namespace bohr
