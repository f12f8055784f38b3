// Command-line front end: build families, derive witnesses, run audits.
// Exit codes: 0 all pass, 1 an audit failed, 2 usage or configuration error.

#include "bohr/audit.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>
#include <sstream>

using namespace bohr;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<long> parse_long_list(const std::string& s) {
  std::vector<long> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_integer(item).get_si());
  return out;
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_integer(item));
  return out;
}

std::vector<Rat> parse_rat_list(const std::string& s) {
  std::vector<Rat> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_rational(item));
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int finish(const AuditReport& rep, const std::string& out, const std::string& summary_path) {
  if (!out.empty()) write_text_file(out, report_jsonl(rep));
  const std::string summary = report_summary(rep).dump(2) + "\n";
  if (summary_path.empty()) {
    std::cout << summary;
  } else {
    write_text_file(summary_path, summary);
  }
  return rep.passed() ? 0 : kExitFail;
}

struct Common {
  std::uint64_t seed = 0;
  int jobs = 0;
  unsigned precision_bits = 128;
  unsigned precision_cap = 4096;
  Precision precision() const { return Precision{precision_bits, precision_cap}; }
};

// --c2 .. --c8, filled in by calibration when absent.
struct CFlags {
  std::map<int, std::string> text;
  int trials = 100;
  long denom_max = 30;
};

void add_c_flags(CLI::App* cmd, CFlags& cf) {
  for (int r = 2; r <= 8; ++r) {
    cmd->add_option("--c" + std::to_string(r), cf.text[r], "c_" + std::to_string(r) + " as p/q (default: calibrated)");
  }
  cmd->add_option("--calibration-trials", cf.trials, "trials used when calibrating a missing c");
  cmd->add_option("--calibration-denom-max", cf.denom_max, "denominator bound used when calibrating");
}

std::map<int, Rat> resolve_c(const CFlags& cf, int r, const Common& common) {
  std::map<int, Rat> out;
  for (int k = 2; k <= std::max(r, 2); ++k) {
    auto it = cf.text.find(k);
    if (it != cf.text.end() && !it->second.empty()) {
      out[k] = parse_rational(it->second);
    } else {
      out[k] = calibrate_c(k, cf.trials, cf.denom_max, common.seed, common.precision());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit r-Bohr-but-not-Bohr integer families: build, witness, audit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "seed for every random choice");
  app.add_option("--jobs", common.jobs, "worker threads (0 = OpenMP default)");
  app.add_option("--precision-bits", common.precision_bits, "starting enclosure precision");
  app.add_option("--precision-cap", common.precision_cap, "largest enclosure precision before Inconclusive");

  // build
  auto* build = app.add_subcommand("build", "build a family manifest");
  int r = 1, stages = 4;
  std::string track = "empirical", out, summary_path, eps_list, L_list, H_list;
  long grid = 64;
  CFlags cflags;
  build->add_option("--r", r, "dimension r")->check(CLI::Range(1, 8));
  build->add_option("--stages", stages, "number of stages")->check(CLI::PositiveNumber);
  build->add_option("--track", track, "paper or empirical");
  build->add_option("--grid", grid, "denominator bound for empirical constants");
  build->add_option("--eps", eps_list, "comma-separated per-stage eps overrides");
  build->add_option("--L", L_list, "comma-separated per-stage L overrides");
  build->add_option("--H", H_list, "comma-separated per-stage H overrides");
  build->add_option("--out", out, "manifest path (default stdout)");
  add_c_flags(build, cflags);

  // params
  auto* params = app.add_subcommand("params", "print stage parameters for one eps");
  std::string eps_text = "1/2", L_text = "1";
  params->add_option("--r", r)->check(CLI::Range(1, 8));
  params->add_option("--eps", eps_text, "eps as p/q");
  params->add_option("--L", L_text, "L");
  params->add_option("--track", track);
  params->add_option("--grid", grid);
  add_c_flags(params, cflags);

  // witness
  auto* witness = app.add_subcommand("witness", "construct all witness angles for a family");
  std::string family_path, witness_path;
  witness->add_option("--family", family_path)->required();
  witness->add_option("--out", out);

  // audit-recurrence
  auto* arec = app.add_subcommand("audit-recurrence", "grid recurrence audit");
  long denom_max = 64;
  std::string eps_override;
  arec->add_option("--family", family_path)->required();
  arec->add_option("--denom-max", denom_max)->check(CLI::PositiveNumber);
  arec->add_option("--eps", eps_override, "audit every stage at this eps instead of eps_N");
  arec->add_option("--out", out, "JSONL report path");
  arec->add_option("--summary", summary_path, "summary path (default stdout)");

  // audit-nonrecurrence
  auto* anon = app.add_subcommand("audit-nonrecurrence", "witness non-recurrence audit");
  std::string delta_text = "1/2";
  int depth = -1;
  anon->add_option("--family", family_path)->required();
  anon->add_option("--witnesses", witness_path, "witness file (default: construct)");
  anon->add_option("--delta", delta_text, "threshold as p/q");
  anon->add_option("--depth", depth, "stages audited (default all)");
  anon->add_option("--out", out);
  anon->add_option("--summary", summary_path);

  // audit-trichotomy
  auto* atri = app.add_subcommand("audit-trichotomy", "two-dimensional trichotomy audit");
  std::string eps2_text = "1/2", H_text = "1,2", scale_text = "1/1", c2_text;
  denom_max = 12;
  atri->add_option("--eps2", eps2_text);
  atri->add_option("--L", L_text);
  atri->add_option("--c2", c2_text, "c_2 as p/q (default: calibrated)");
  atri->add_option("--denom-max", denom_max);
  atri->add_option("--H", H_text, "comma-separated H values");
  atri->add_option("--delta-scale", scale_text, "multiply delta2 (mutation control)");
  atri->add_option("--track", track);
  atri->add_option("--out", out);
  atri->add_option("--summary", summary_path);

  // audit-kl
  auto* akl = app.add_subcommand("audit-kl", "soundness of the independence condition");
  int trials = 100;
  std::string c_text;
  akl->add_option("--r", r)->check(CLI::Range(1, 8));
  akl->add_option("--trials", trials)->check(CLI::PositiveNumber);
  akl->add_option("--denom-max", denom_max);
  akl->add_option("--c", c_text, "c as p/q (default: calibrated)");
  akl->add_option("--out", out);
  akl->add_option("--summary", summary_path);

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "estimate c_r");
  cal->add_option("--r", r)->check(CLI::Range(1, 8));
  cal->add_option("--trials", trials)->check(CLI::PositiveNumber);
  cal->add_option("--denom-max", denom_max);

  // union
  auto* uni = app.add_subcommand("union", "union of stages picked from several families");
  std::vector<std::string> union_families;
  std::string stage_list, jmin_list;
  uni->add_option("--family", union_families, "manifest paths, one per component")->required();
  uni->add_option("--stages", stage_list, "comma-separated stage pick per family")->required();
  uni->add_option("--j-min", jmin_list, "comma-separated j_min per family (default 1)");
  uni->add_option("--denom-max", denom_max);
  uni->add_option("--out", out);
  uni->add_option("--summary", summary_path);

  // katznelson
  auto* katz = app.add_subcommand("katznelson", "baseline set {n : min_j |lambda_j^n + 1| < delta}");
  std::string theta_list, nmax_text = "100";
  katz->add_option("--theta", theta_list, "comma-separated angles p/q")->required();
  katz->add_option("--delta", delta_text);
  katz->add_option("--n-max", nmax_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (common.jobs > 0) omp_set_num_threads(common.jobs);

  try {
    if (*build) {
      BuildConfig cfg;
      cfg.track = parse_track(track);
      cfg.grid_denom_max = grid;
      cfg.precision = common.precision();
      cfg.seed = common.seed;
      if (r >= 2) cfg.c = resolve_c(cflags, r, common);
      ScheduleHints hints;
      hints.epsilon = parse_rat_list(eps_list);
      hints.L = parse_int_list(L_list);
      hints.H = parse_int_list(H_list);
      const SetFamily fam = build_family(r, stages, cfg, hints);
      emit(out, dump_manifest(fam));
      const ScheduleReport sched = schedule_check(fam);
      for (const auto& v : sched.violations) {
        std::cerr << "schedule violation at stage " << v.stage << ": " << v.rule << " (" << v.detail << ")\n";
      }
      for (const auto& o : sched.overlaps) std::cerr << "overlap: " << o << "\n";
      return 0;
    }
    if (*params) {
      BuildConfig cfg;
      cfg.track = parse_track(track);
      cfg.grid_denom_max = grid;
      cfg.precision = common.precision();
      if (r >= 2) cfg.c = resolve_c(cflags, r, common);
      const StageParamsR p = stage_params_general(r, parse_rational(eps_text), parse_integer(L_text), cfg);
      Json j;
      j["r"] = p.r;
      j["epsilon"] = to_string(p.epsilon);
      j["L"] = to_string(p.L);
      Json d = Json::object();
      for (const auto& [a, v] : p.Delta) d[subset_key(a)] = to_string(v);
      j["Delta"] = d;
      j["Theta"] = to_string(p.Theta);
      j["Q"] = to_string(p.Q);
      j["delta"] = to_string(p.delta);
      j["divisibility_chain"] = is_divisibility_chain(p.Delta);
      Json rec = Json::object();
      for (const auto& [k, v] : p.record) rec[k] = v;
      j["record"] = rec;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*witness) {
      const SetFamily fam = read_family(family_path);
      Json j = witnesses_to_json(all_witnesses(fam));
      j["family_digest"] = family_digest(fam);
      emit(out, j.dump(2) + "\n");
      return 0;
    }
    if (*arec) {
      const SetFamily fam = read_family(family_path);
      std::optional<Rat> eps;
      if (!eps_override.empty()) eps = parse_rational(eps_override);
      return finish(grid_audit(fam, denom_max, eps), out, summary_path);
    }
    if (*anon) {
      const SetFamily fam = read_family(family_path);
      std::vector<WitnessAngle> ws;
      if (witness_path.empty()) {
        try {
          ws = all_witnesses(fam);
        } catch (const Error& e) {
          // A witness that cannot be built is a failed audit, not a usage error.
          AuditReport rep;
          rep.kind = AuditKind::NonRecurrence;
          rep.family_digest = family_digest(fam);
          rep.instances.push_back(AuditInstance{false, Json{{"check", "witness"}, {"error", e.what()}}});
          return finish(rep, out, summary_path);
        }
      } else {
        ws = witnesses_from_json(Json::parse(read_text_file(witness_path)));
      }
      SamplingPolicy policy;
      policy.seed = common.seed;
      const int d = depth < 0 ? static_cast<int>(fam.stages.size()) : depth;
      return finish(nonrecurrence_audit(fam, ws, parse_rational(delta_text), d, policy), out, summary_path);
    }
    if (*atri) {
      BuildConfig cfg;
      cfg.track = parse_track(track);
      cfg.precision = common.precision();
      const Rat c2 = c2_text.empty() ? calibrate_c(2, cflags.trials, cflags.denom_max, common.seed, cfg.precision)
                                     : parse_rational(c2_text);
      return finish(trichotomy_audit(parse_rational(eps2_text), parse_integer(L_text), c2, denom_max,
                                     parse_long_list(H_text), cfg, parse_rational(scale_text)),
                    out, summary_path);
    }
    if (*akl) {
      const Rat c = c_text.empty() ? calibrate_c(r, trials, denom_max, common.seed, common.precision())
                                   : parse_rational(c_text);
      return finish(kl_soundness_audit(r, trials, denom_max, common.seed, c, common.precision()), out,
                    summary_path);
    }
    if (*cal) {
      const Rat c = calibrate_c(r, trials, denom_max, common.seed, common.precision());
      std::cout << Json{{"r", r},
                        {"trials", trials},
                        {"denom_max", denom_max},
                        {"seed", std::to_string(common.seed)},
                        {"c", to_string(c)}}
                       .dump(2)
                << "\n";
      return 0;
    }
    if (*uni) {
      std::vector<SetFamily> fams;
      for (const auto& path : union_families) fams.push_back(read_family(path));
      const auto picks_stage = parse_long_list(stage_list);
      const auto picks_jmin = parse_int_list(jmin_list);
      if (picks_stage.size() != fams.size()) throw Error(ErrorCode::Precondition, "one --stages entry per family");
      std::vector<std::pair<int, Int>> picks;
      for (std::size_t i = 0; i < fams.size(); ++i) {
        picks.emplace_back(static_cast<int>(picks_stage[i]), i < picks_jmin.size() ? picks_jmin[i] : Int(1));
      }
      const BohrUnion u(fams, picks);
      return finish(union_audit(u, denom_max), out, summary_path);
    }
    if (*katz) {
      std::vector<UAngle> thetas;
      for (const auto& t : split(theta_list, ',')) thetas.push_back(UAngle::parse(t));
      const auto ns = katznelson_set(thetas, parse_rational(delta_text), parse_integer(nmax_text),
                                     common.precision());
      Json arr = Json::array();
      for (const Int& n : ns) arr.push_back(to_string(n));
      std::cout << Json{{"caveat", kKatznelsonCaveat}, {"count", ns.size()}, {"n", arr}}.dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
