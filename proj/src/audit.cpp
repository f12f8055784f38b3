#include "bohr/audit.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <random>
#include <set>

namespace bohr {

namespace {

Json angles_json(const std::vector<UAngle>& angles) {
  Json a = Json::array();
  for (const UAngle& t : angles) a.push_back(t.str());
  return a;
}

// Runs fn(i) for every instance; bohr::Error inside an instance becomes a
// failed instance carrying the message.
template <class F>
std::vector<AuditInstance> run_instances(std::size_t count, F&& fn, bool parallel) {
  std::vector<AuditInstance> out(count);
  auto one = [&](std::size_t i) {
    try {
      out[i] = fn(i);
    } catch (const Error& e) {
      out[i] = AuditInstance{false, Json{{"index", i}, {"error", e.what()}}};
    }
  };
  if (!parallel) {
    for (std::size_t i = 0; i < count; ++i) one(i);
    return out;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    try {
      one(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Certified upper value of max_i |angle_i - 1|, all known to be below eps.
Rat certified_max_hi(const std::vector<UAngle>& angles, const Rat& epsilon, const Precision& p) {
  Rat best = 0;
  for (const UAngle& a : angles) {
    const DistZ d = dist_to_Z(a);
    for (unsigned bits = p.start_bits;; bits *= 2) {
      if (bits > p.cap_bits) throw Error(ErrorCode::Inconclusive, "hit certificate unresolved");
      const ChordEnclosure e = chord(d, bits);
      if (e.hi < epsilon) {
        best = std::max(best, e.hi);
        break;
      }
    }
  }
  return best;
}

bool all_below(const std::vector<UAngle>& angles, const Rat& epsilon, const Precision& p) {
  for (const UAngle& a : angles) {
    if (!chord_lt(dist_to_Z(a), epsilon, p)) return false;
  }
  return true;
}

Int period_of(const std::vector<UAngle>& steps) {
  Int period = 1;
  for (const UAngle& s : steps) period = lcm_of(period, s.denom());
  return period;
}

// Smallest k in [0, count) with all(base_i + k step_i) below eps, scanning
// at most one period.
std::optional<Int> progression_hit(std::vector<UAngle> cur, const std::vector<UAngle>& step, const Int& count,
                                   const Rat& epsilon, const Precision& p, const Int& scan_cap) {
  const Int period = period_of(step);
  const Int limit = count < period ? count : period;
  if (limit > scan_cap) throw Error(ErrorCode::SizeLimit, "scan of " + to_string(limit) + " steps exceeds cap");
  for (Int k = 0; k < limit; ++k) {
    if (k > 0) {
      for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = cur[i] + step[i];
    }
    if (all_below(cur, epsilon, p)) return k;
  }
  return std::nullopt;
}

std::vector<UAngle> scaled(const std::vector<UAngle>& lambdas, const Int& n) {
  std::vector<UAngle> out;
  out.reserve(lambdas.size());
  for (const UAngle& t : lambdas) out.push_back(reduce(t, n));
  return out;
}

Json hit_json(const RecurrenceHit& h, const std::vector<BlockSpec>& blocks) {
  return Json{{"n", to_string(h.n)},
              {"block", blocks[h.block].label()},
              {"index", to_string(h.index)},
              {"chord_hi", to_string(h.chord_hi)}};
}

AuditReport grid_audit_impl(const SetFamily& family, long denom_max, const std::optional<Rat>& eps_override,
                            bool parallel) {
  if (denom_max < 1) throw Error(ErrorCode::Precondition, "denom_max must be >= 1");
  const auto tuples = grid_tuples(family.r, denom_max);
  const std::size_t S = family.stages.size();
  const Precision p = family.config.precision;
  AuditReport rep;
  rep.kind = AuditKind::Recurrence;
  rep.family_digest = family_digest(family);
  rep.config = Json{{"denom_max", denom_max}, {"tuples", tuples.size()}, {"stages", S}};
  if (eps_override) rep.config["epsilon"] = to_string(*eps_override);
  rep.instances = run_instances(
      tuples.size() * S,
      [&](std::size_t idx) {
        const auto& tuple = tuples[idx / S];
        const Stage& st = family.stages[idx % S];
        const Rat eps = eps_override ? *eps_override : st.epsilon;
        Json d{{"index", idx}, {"stage", st.N}, {"lambdas", angles_json(tuple)}, {"epsilon", to_string(eps)}};
        const auto hit = blocks_hit(st.blocks, tuple, eps, p);
        if (!hit) {
          d["outcome"] = "NotFound";
          return AuditInstance{false, d};
        }
        d["outcome"] = "hit";
        d["hit"] = hit_json(*hit, st.blocks);
        return AuditInstance{true, d};
      },
      parallel);
  return rep;
}

const WitnessAngle* witness_for(const std::vector<WitnessAngle>& ws, const BlockSpec& b) {
  for (const WitnessAngle& w : ws) {
    if (b.kind == BlockKind::Zero && w.kind == WitnessKind::Mu0) return &w;
    if (b.kind == BlockKind::Empty && w.kind == WitnessKind::MuEmpty) return &w;
    if (b.kind == BlockKind::Subset && w.kind == WitnessKind::MuSubset && w.A == b.A) return &w;
  }
  return nullptr;
}

std::vector<UAngle> grid_angles(long denom_max) { return rational_grid(denom_max); }

AuditReport dichotomy_impl(const std::vector<Rat>& epsilons, long denom_max, const std::vector<long>& H_range,
                           const std::vector<long>& L_range, const BuildConfig& cfg, bool parallel) {
  std::vector<DichotomyParams> params;
  for (const Rat& e : epsilons) params.push_back(one_d_constants(e, Int(1), cfg));
  const auto lambdas = grid_angles(denom_max);

  struct Case {
    std::size_t lambda, eps;
    long H, L, S;
  };
  std::vector<Case> cases;
  for (std::size_t e = 0; e < epsilons.size(); ++e)
    for (std::size_t l = 0; l < lambdas.size(); ++l)
      for (long H : H_range)
        for (long L : L_range) {
          cases.push_back({l, e, H, L, 1});
          if (H != 1) cases.push_back({l, e, H, L, H});
        }

  AuditReport rep;
  rep.kind = AuditKind::Dichotomy;
  rep.config = Json{{"denom_max", denom_max}, {"track", track_name(cfg.track)}, {"cases", cases.size()}};
  Json eps = Json::array();
  for (const DichotomyParams& dp : params) {
    eps.push_back(Json{{"epsilon", to_string(dp.epsilon)}, {"kappa", to_string(dp.kappa)}});
  }
  rep.config["epsilons"] = eps;
  rep.instances = run_instances(
      cases.size(),
      [&](std::size_t i) {
        const Case& c = cases[i];
        const UAngle& lambda = lambdas[c.lambda];
        const DichotomyParams& dp = params[c.eps];
        const Int H(c.H), L(c.L), S(c.S);
        Json d{{"index", i},
               {"lambda", lambda.str()},
               {"epsilon", to_string(dp.epsilon)},
               {"H", c.H},
               {"L", c.L},
               {"S", c.S}};
        const DichotomyOutcome out = dichotomy(lambda, H, L, S, dp.epsilon, dp, cfg.precision);
        Int n;
        bool shape_ok;
        if (out.collapsed()) {
          n = std::get<PowerCollapse>(out.branch).n;
          shape_ok = n == H * dp.Sigma * L;
          d["branch"] = "PowerCollapse";
        } else {
          const NetHit& h = std::get<NetHit>(out.branch);
          n = h.n;
          shape_ok = h.j >= 1 && h.j <= dp.Theta && n == H * L * h.j + S;
          d["branch"] = "NetHit";
          d["j"] = to_string(h.j);
        }
        // Independent re-check at doubled precision.
        const ChordEnclosure again = pow_chord(lambda, n, 2 * cfg.precision.start_bits);
        const bool ok = shape_ok && out.certificate.hi < dp.epsilon && again.hi < dp.epsilon;
        d["certificate_hi"] = to_string(out.certificate.hi);
        d["recheck_hi"] = to_string(again.hi);
        return AuditInstance{ok, d};
      },
      parallel);
  return rep;
}

}  // namespace

const char* audit_kind_name(AuditKind k) {
  switch (k) {
    case AuditKind::Recurrence: return "Recurrence";
    case AuditKind::NonRecurrence: return "NonRecurrence";
    case AuditKind::Dichotomy: return "Dichotomy";
    case AuditKind::Trichotomy: return "Trichotomy";
    case AuditKind::KLSoundness: return "KLSoundness";
    case AuditKind::Union: return "Union";
  }
  return "?";
}

std::size_t AuditReport::pass_count() const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(), [](const AuditInstance& i) { return i.pass; }));
}

std::size_t AuditReport::fail_count() const { return instances.size() - pass_count(); }

Json report_summary(const AuditReport& rep) {
  Json j;
  j["kind"] = audit_kind_name(rep.kind);
  j["pass_count"] = rep.pass_count();
  j["fail_count"] = rep.fail_count();
  j["total"] = rep.instances.size();
  if (!rep.family_digest.empty()) j["family_digest"] = rep.family_digest;
  j["config"] = rep.config;
  return j;
}

std::string report_jsonl(const AuditReport& rep) {
  std::string out;
  for (const AuditInstance& inst : rep.instances) {
    Json line = inst.data;
    line["pass"] = inst.pass;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::optional<RecurrenceHit> blocks_hit(const std::vector<BlockSpec>& blocks, const std::vector<UAngle>& lambdas,
                                        const Rat& epsilon, const Precision& p, const Int& scan_cap) {
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const BlockSpec& b = blocks[bi];
    if (b.size() <= 0) continue;
    std::optional<Int> index;
    switch (b.kind) {
      case BlockKind::Zero: {
        // n = H q + 1, q = 1 + k.
        auto hit = progression_hit(scaled(lambdas, b.H + 1), scaled(lambdas, b.H), b.Q, epsilon, p, scan_cap);
        if (hit) index = *hit + 1;
        break;
      }
      case BlockKind::Empty:
        if (all_below(scaled(lambdas, b.H * b.Delta), epsilon, p)) index = Int(1);
        break;
      case BlockKind::Subset: {
        // n = H Delta (L j + 1), j = j_min + k.
        const Int unit = b.H * b.Delta;
        auto hit = progression_hit(scaled(lambdas, unit * (b.L * b.j_min + 1)), scaled(lambdas, unit * b.L), b.size(),
                                   epsilon, p, scan_cap);
        if (hit) index = b.j_min + *hit;
        break;
      }
    }
    if (!index) continue;
    const Int n = b.kind == BlockKind::Subset ? b.element(*index - b.j_min + 1) : b.element(*index);
    return RecurrenceHit{n, bi, *index, certified_max_hi(scaled(lambdas, n), epsilon, p)};
  }
  return std::nullopt;
}

std::optional<RecurrenceHit> recurrence_hit(const SetFamily& family, const std::vector<UAngle>& lambdas,
                                            const Rat& epsilon, const Precision& p) {
  if (lambdas.size() > static_cast<std::size_t>(family.r)) {
    throw Error(ErrorCode::Precondition, "more angles than the family dimension");
  }
  for (const Stage& st : family.stages) {
    if (st.epsilon <= epsilon) return blocks_hit(st.blocks, lambdas, st.epsilon, p);
  }
  throw Error(ErrorCode::Precondition, "no stage with eps_N <= " + to_string(epsilon));
}

std::vector<std::vector<UAngle>> grid_tuples(int r, long denom_max) {
  const auto angles = grid_angles(denom_max);
  std::vector<std::vector<UAngle>> out{{}};
  for (int i = 0; i < r; ++i) {
    std::vector<std::vector<UAngle>> next;
    next.reserve(out.size() * angles.size());
    for (const auto& prefix : out) {
      for (const UAngle& a : angles) {
        auto t = prefix;
        t.push_back(a);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

AuditReport grid_audit(const SetFamily& family, long denom_max, const std::optional<Rat>& eps_override) {
  return grid_audit_impl(family, denom_max, eps_override, true);
}

AuditReport grid_audit_serial(const SetFamily& family, long denom_max, const std::optional<Rat>& eps_override) {
  return grid_audit_impl(family, denom_max, eps_override, false);
}

std::vector<Int> sample_indices(const Int& size, const SamplingPolicy& policy, std::uint64_t stream) {
  std::vector<Int> out;
  if (size <= 0) return out;
  if (size <= policy.full_limit) {
    for (Int k = 1; k <= size; ++k) out.push_back(k);
    return out;
  }
  std::set<Int> picked;
  for (long k = 1; k <= policy.head; ++k) picked.insert(Int(k));
  picked.insert(size - 1);
  picked.insert(size);
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(policy.seed * 0x9E3779B97F4A7C15ULL + stream));
  for (long k = 0; k < policy.random; ++k) picked.insert(Int(rng.get_z_range(size) + 1));
  out.assign(picked.begin(), picked.end());
  return out;
}

AuditReport nonrecurrence_audit(const SetFamily& family, const std::vector<WitnessAngle>& witnesses,
                                const Rat& delta, int depth, const SamplingPolicy& policy) {
  AuditReport rep;
  rep.kind = AuditKind::NonRecurrence;
  rep.family_digest = family_digest(family);
  rep.config = Json{{"delta", to_string(delta)}, {"depth", depth}, {"seed", std::to_string(policy.seed)}};
  if (depth <= 0) return rep;
  depth = std::min(depth, static_cast<int>(family.stages.size()));

  for (const ScheduleViolation& v : schedule_check(family).violations) {
    rep.instances.push_back(
        AuditInstance{false, Json{{"check", "schedule"}, {"stage", v.stage}, {"rule", v.rule}, {"detail", v.detail}}});
  }
  for (const WitnessAngle& w : witnesses) {
    const bool ok = verify_witness(w);
    rep.instances.push_back(AuditInstance{ok, Json{{"check", "witness"}, {"witness", w.label()}, {"theta", w.theta.str()}}});
  }

  struct Element {
    int stage;
    std::size_t block;
    Int index;
  };
  std::vector<Element> elements;
  for (int s = 0; s < depth; ++s) {
    const Stage& st = family.stages[static_cast<std::size_t>(s)];
    for (std::size_t bi = 0; bi < st.blocks.size(); ++bi) {
      const BlockSpec& b = st.blocks[bi];
      if (!witness_for(witnesses, b)) {
        rep.instances.push_back(AuditInstance{false, Json{{"check", "coverage"}, {"block", b.label()}}});
        continue;
      }
      const std::uint64_t stream = static_cast<std::uint64_t>(s) * 1024 + bi;
      for (const Int& k : sample_indices(b.size(), policy, stream)) elements.push_back({s, bi, k});
    }
  }

  const Precision p = family.config.precision;
  auto checked = run_instances(
      elements.size(),
      [&](std::size_t i) {
        const Element& e = elements[i];
        const BlockSpec& b = family.stages[static_cast<std::size_t>(e.stage)].blocks[e.block];
        const Int n = b.element(e.index);
        const WitnessAngle* w = witness_for(witnesses, b);
        const DistZ d = dist_to_Z(reduce(w->theta, n));
        const bool own = chord_gt(d, delta, p);
        bool combined = own;
        for (const WitnessAngle& other : witnesses) {
          if (combined) break;
          combined = chord_gt(dist_to_Z(reduce(other.theta, n)), delta, p);
        }
        const ChordEnclosure enc = chord(d, p.start_bits);
        Json data{{"check", "element"},
                  {"block", b.label()},
                  {"index", to_string(e.index)},
                  {"witness", w->label()},
                  {"chord_lo", to_string(enc.lo)},
                  {"chord_hi", to_string(enc.hi)},
                  {"combined", combined}};
        return AuditInstance{own && combined, data};
      },
      true);
  for (auto& inst : checked) rep.instances.push_back(std::move(inst));
  return rep;
}

AuditReport trichotomy_audit(const Rat& epsilon2, const Int& L, const Rat& c2, long denom_max,
                             const std::vector<long>& H_range, const BuildConfig& base_cfg, const Rat& delta_scale) {
  BuildConfig cfg = base_cfg;
  cfg.grid_denom_max = denom_max;
  const StageParams2 s = stage_params_2(epsilon2, L, c2, cfg);
  const Rat delta = s.delta2 * delta_scale;
  const Int Q = floor_of(c2 / delta) + 1;
  const auto pairs = grid_tuples(2, denom_max);

  AuditReport rep;
  rep.kind = AuditKind::Trichotomy;
  rep.config = Json{{"epsilon2", to_string(epsilon2)}, {"L", to_string(L)},           {"c2", to_string(c2)},
                    {"denom_max", denom_max},           {"delta2", to_string(delta)}, {"Q2", to_string(Q)},
                    {"Gamma2", to_string(s.Gamma2)},    {"Sigma2", to_string(s.Sigma2)},
                    {"Theta2", to_string(s.Theta2)},    {"track", track_name(cfg.track)}};
  rep.instances = run_instances(
      pairs.size() * H_range.size(),
      [&](std::size_t idx) {
        const auto& pair = pairs[idx / H_range.size()];
        const Int H(H_range[idx % H_range.size()]);
        std::vector<BlockSpec> blocks(3);
        blocks[0].kind = BlockKind::Zero;
        blocks[0].H = H;
        blocks[0].Q = Q;
        blocks[1].kind = BlockKind::Empty;
        blocks[1].H = H;
        blocks[1].Delta = s.Sigma2 * L;
        blocks[2].kind = BlockKind::Subset;
        blocks[2].A = {1};
        blocks[2].H = H;
        blocks[2].Delta = s.Gamma2;
        blocks[2].L = L;
        blocks[2].Theta = s.Theta2;
        Json d{{"index", idx}, {"lambdas", angles_json(pair)}, {"H", to_string(H)}};
        const auto hit = blocks_hit(blocks, pair, epsilon2, cfg.precision);
        if (!hit) {
          d["outcome"] = "NotFound";
          return AuditInstance{false, d};
        }
        d["outcome"] = "hit";
        d["hit"] = hit_json(*hit, blocks);
        return AuditInstance{true, d};
      },
      true);
  return rep;
}

AuditReport dichotomy_audit(const std::vector<Rat>& epsilons, long denom_max, const std::vector<long>& H_range,
                            const std::vector<long>& L_range, const BuildConfig& cfg) {
  return dichotomy_impl(epsilons, denom_max, H_range, L_range, cfg, true);
}

AuditReport dichotomy_audit_serial(const std::vector<Rat>& epsilons, long denom_max,
                                   const std::vector<long>& H_range, const std::vector<long>& L_range,
                                   const BuildConfig& cfg) {
  return dichotomy_impl(epsilons, denom_max, H_range, L_range, cfg, false);
}

AuditReport kl_soundness_audit(int r, int trials, long denom_max, std::uint64_t seed, const Rat& c,
                               const Precision& p) {
  const auto instances = kl_instances(r, trials, denom_max, seed);
  AuditReport rep;
  rep.kind = AuditKind::KLSoundness;
  rep.config = Json{{"r", r}, {"trials", trials}, {"denom_max", denom_max}, {"seed", std::to_string(seed)},
                    {"c", to_string(c)}};
  rep.instances = run_instances(
      instances.size(),
      [&](std::size_t i) {
        const KLInstance& in = instances[i];
        Json d{{"index", i},
               {"lambdas", angles_json(in.lambdas)},
               {"mus", angles_json(in.mus)},
               {"epsilon", to_string(in.epsilon)},
               {"Q", to_string(in.Q)}};
        if (!condition_holds(in.lambdas, in.epsilon, Rat(in.Q), c, Int(1), p)) {
          d["outcome"] = "condition-fails";
          return AuditInstance{true, d};
        }
        const auto q = simultaneous_hit(in.lambdas, in.mus, in.epsilon, in.Q, Int(1), p);
        d["outcome"] = q ? "hit" : "NotFound";
        if (q) d["q"] = to_string(*q);
        return AuditInstance{q.has_value(), d};
      },
      true);
  return rep;
}

AuditReport union_audit(const BohrUnion& u, long denom_max, const Int& enumerate_limit) {
  AuditReport rep;
  rep.kind = AuditKind::Union;
  rep.config = Json{{"denom_max", denom_max}, {"components", u.components().size()}};

  // Membership consistency per enumerable block.
  for (std::size_t ci = 0; ci < u.components().size(); ++ci) {
    const UnionComponent& comp = u.components()[ci];
    for (const BlockSpec& b : comp.blocks) {
      Json d{{"check", "membership"}, {"component", ci}, {"r", comp.r}, {"block", b.label()}};
      if (b.size() > enumerate_limit) {
        d["outcome"] = "skipped (too large)";
        d["size"] = to_string(b.size());
        rep.instances.push_back(AuditInstance{true, d});
        continue;
      }
      std::size_t bad = 0;
      const auto elems = enumerate_block(b, enumerate_limit);
      for (std::size_t k = 0; k < elems.size(); ++k) {
        const auto hit = u.contains(elems[k]);
        if (!hit || hit->component != ci || hit->kind != b.kind || hit->A != b.A) ++bad;
      }
      d["elements"] = elems.size();
      d["mismatches"] = bad;
      rep.instances.push_back(AuditInstance{bad == 0, d});
    }
  }

  // Recurrence in each component at its own eps.
  for (std::size_t ci = 0; ci < u.components().size(); ++ci) {
    const UnionComponent& comp = u.components()[ci];
    const Rat eps = comp.blocks.front().epsilon;
    const auto tuples = grid_tuples(comp.r, denom_max);
    auto part = run_instances(
        tuples.size(),
        [&](std::size_t i) {
          Json d{{"check", "recurrence"}, {"component", ci}, {"r", comp.r}, {"lambdas", angles_json(tuples[i])},
                 {"epsilon", to_string(eps)}};
          const auto hit = blocks_hit(comp.blocks, tuples[i], eps);
          if (!hit) {
            d["outcome"] = "NotFound";
            return AuditInstance{false, d};
          }
          d["outcome"] = "hit";
          d["hit"] = hit_json(*hit, comp.blocks);
          const auto member = u.contains(hit->n);
          const bool own = member && member->component == ci;
          return AuditInstance{own, d};
        },
        true);
    for (auto& inst : part) rep.instances.push_back(std::move(inst));
  }
  return rep;
}

}  // namespace bohr
