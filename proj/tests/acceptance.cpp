// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "bohr/audit.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bohr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string counts(const AuditReport& rep) {
  return std::to_string(rep.pass_count()) + " pass / " + std::to_string(rep.fail_count()) + " fail";
}

Rat tiny_c() { return parse_rational("1/10000000000000000000000000000000000000000"); }

const Rat& calibrated_c2() {
  static const Rat c = calibrate_c(2, 100, 30, 0);
  return c;
}

BuildConfig empirical_cfg() {
  BuildConfig cfg;
  cfg.c[2] = calibrated_c2();
  return cfg;
}

// 4 {x} <= |e^{2 i pi x} - 1| <= 2 pi {x}, conclusive by 512 bits.
Outcome ac1() {
  const Precision p{64, 512};
  std::size_t checked = 0;
  for (const UAngle& x : rational_grid(200)) {
    if (x.is_zero()) continue;
    const DistZ d = dist_to_Z(x);
    if (cmp_chord(d, 4 * d.value, p) < 0) return {false, "lower bound fails at " + x.str()};
    bool upper = false;
    for (unsigned bits = p.start_bits; bits <= p.cap_bits && !upper; bits *= 2) {
      const ChordEnclosure e = chord(d, bits);
      const RealEnclosure pi = pi_enclosure(bits);
      if (e.lo > 2 * pi.hi * d.value) return {false, "upper bound fails at " + x.str()};
      upper = e.hi <= 2 * pi.lo * d.value;
    }
    if (!upper) return {false, "upper bound inconclusive at " + x.str()};
    ++checked;
  }
  return {true, std::to_string(checked) + " angles"};
}

Outcome ac2() {
  BuildConfig cfg;
  cfg.track = Track::Paper;
  const AuditReport rep = dichotomy_audit({Rat(1), Rat(1, 2)}, 60, {1, 2, 3}, {1, 2}, cfg);
  return {rep.passed() && !rep.instances.empty(), counts(rep)};
}

// m_1 = 100 makes theta = 1/2 admissible; m_1 = 101 forces a genuine nesting.
Outcome ac3() {
  std::ostringstream out;
  for (long m1 : {100L, 101L}) {
    std::vector<Int> m{Int(m1)};
    while (m.size() < 10) m.push_back(m.back() * m.back());
    const auto [lo, hi] = default_seed(m.front());
    const WitnessAngle w = cantor_angle(m, lo, hi, 10);
    const Rat theta = w.theta.turns();
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Rat x = theta * m[k];
      Rat frac = x - Rat(floor_of(x));
      if (frac > Rat(1, 2)) frac = 1 - frac;
      const Rat bound = k + 1 < m.size() ? Rat(Rat(2 * m[k]) / m[k + 1]) : Rat(0);
      if (frac > bound) return {false, "m_1 = " + std::to_string(m1) + ": bound " + std::to_string(k + 1) + " fails"};
    }
    if (!near_minus_one(w.theta)) return {false, "m_1 = " + std::to_string(m1) + ": |lambda + 1| >= 1"};
    if (theta < lo || theta > hi) return {false, "m_1 = " + std::to_string(m1) + ": theta outside the seed"};
    out << (m1 == 100 ? "" : "; ") << "m_1 = " << m1 << ": 10 bounds hold, theta denominator "
        << w.theta.denom().get_str().size() << " digits";
  }
  return {true, out.str()};
}

Outcome ac4() {
  const SetFamily fam = build_family(1, 4, empirical_cfg());
  const AuditReport grid = grid_audit(fam, 64);
  const bool grid_ok = grid.passed() && grid.pass_count() == grid_tuples(1, 64).size() * fam.stages.size();

  std::vector<WitnessAngle> ws{witness_mu0(fam), witness_mu_empty(fam)};
  SamplingPolicy full;
  Int total = 0;
  for (const Stage& st : fam.stages) {
    for (const BlockSpec& b : st.blocks) total += b.size();
  }
  full.full_limit = total;
  const AuditReport non = nonrecurrence_audit(fam, ws, Rat(1, 2), 4, full);
  std::size_t elements = 0;
  for (const AuditInstance& inst : non.instances) elements += inst.data.at("check") == "element";
  const bool non_ok = non.passed() && Int(elements) == total;
  return {grid_ok && non_ok,
          "grid " + counts(grid) + "; nonrecurrence " + counts(non) + " over " + to_string(total) + " elements"};
}

std::string params_problem(const StageParamsR& p, const Rat& c) {
  if (p.Delta.size() != (std::size_t{1} << (p.r - 1))) return "wrong number of Delta keys";
  if (!is_divisibility_chain(p.Delta)) return "Delta is not a divisibility chain";
  if (!(p.delta > 0)) return "delta not positive";
  if (!(Rat(p.Q) > c / p.delta)) return "Q <= c / delta";
  for (const auto& [a, v] : p.Delta) {
    if (v < 1) return "Delta below 1";
  }
  return {};
}

Outcome ac5() {
  std::ostringstream out;
  bool ok = true;

  BuildConfig cfg2 = empirical_cfg();
  const SetFamily f2 = build_family(2, 2, cfg2);
  BuildConfig cfg3 = cfg2;
  cfg3.c[2] = tiny_c();
  cfg3.c[3] = tiny_c();
  const SetFamily f3 = build_family(3, 2, cfg3);
  for (const SetFamily* fam : {&f2, &f3}) {
    for (const Stage& st : fam->stages) {
      const std::string problem = params_problem(st.params, fam->config.c_for(fam->r));
      if (!problem.empty()) {
        ok = false;
        out << "r=" << fam->r << " N=" << st.N << ": " << problem << "; ";
      }
    }
    if (!schedule_check(*fam).passed()) {
      ok = false;
      out << "r=" << fam->r << " schedule violated; ";
    }
  }
  const StageParams2 sp = stage_params_2(Rat(1, 2), 2, calibrated_c2(), cfg2);
  if (!(Rat(sp.Q2) > calibrated_c2() / sp.delta2) || sp.Sigma2 != sp.Gamma2 * sp.Sigma1) {
    ok = false;
    out << "stage_params_2 invariants; ";
  }

  const AuditReport tri = trichotomy_audit(Rat(1, 2), 2, calibrated_c2(), 12, {1, 2}, cfg2);
  ok = ok && tri.passed();
  out << "trichotomy " << counts(tri);

  for (const SetFamily* fam : {&f2, &f3}) {
    const auto ws = all_witnesses(*fam);
    const AuditReport rep = nonrecurrence_audit(*fam, ws, Rat(1, 2), 2);
    const bool count_ok = ws.size() == (std::size_t{1} << (fam->r - 1)) + 1;
    ok = ok && rep.passed() && count_ok;
    out << "; r=" << fam->r << " nonrecurrence (" << ws.size() << " witnesses) " << counts(rep);
  }
  return {ok, out.str()};
}

Outcome ac6() {
  const AuditReport rep = kl_soundness_audit(2, 100, 30, 0, calibrated_c2());
  const bool control = !simultaneous_hit({UAngle()}, {UAngle::parse("1/2")}, Rat(1, 2), Int(1000000), 1).has_value();
  return {rep.passed() && !rep.instances.empty() && control,
          "c2 = " + to_string(calibrated_c2()) + ", " + counts(rep) + ", negative control " +
              (control ? "NotFound" : "found a hit")};
}

Outcome ac7() {
  const BuildConfig cfg = empirical_cfg();
  const SetFamily f1 = build_family(1, 1, cfg);
  const SetFamily f2 = build_family(2, 2, cfg);
  const BohrUnion u({f1, f2}, {{1, Int(1)}, {2, Int(1)}});
  const AuditReport rep = union_audit(u, 20);
  return {rep.passed() && !rep.instances.empty(), counts(rep)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BOHRCTL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac8() {
  std::ostringstream out;
  bool ok = true;
  BuildConfig cfg;

  // c2 = 1 keeps Q2 small enough for the grid to see the corruption; the
  // unmutated run with the same parameters is the paired control.
  const AuditReport control = trichotomy_audit(Rat(1, 2), 2, Rat(1), 12, {1}, cfg);
  const AuditReport mutated = trichotomy_audit(Rat(1, 2), 2, Rat(1), 12, {1}, cfg, Rat(1000000));
  ok = ok && control.passed() && mutated.fail_count() > 0;
  out << "delta2 x 10^6: control " << counts(control) << ", mutated " << counts(mutated);

  const BuildConfig ecfg = empirical_cfg();
  ScheduleHints short_L;
  short_L.L = {Int(2)};
  const SetFamily bad_L = build_family(2, 2, ecfg, short_L);
  const AuditReport rep_L = nonrecurrence_audit(bad_L, all_witnesses(bad_L), Rat(1, 2), 2);
  ok = ok && rep_L.fail_count() > 0;
  out << "; L_1 = 2: " << counts(rep_L);

  const SetFamily good = build_family(1, 2, ecfg);
  ScheduleHints short_H;
  short_H.H = {good.stages[0].H, good.stages[0].max_element() + 1};
  const SetFamily bad_H = build_family(1, 2, ecfg, short_H);
  const AuditReport rep_H = nonrecurrence_audit(bad_H, all_witnesses(bad_H), Rat(1, 2), 2);
  ok = ok && rep_H.fail_count() > 0;
  out << "; H_2 below bound: " << counts(rep_H);

  const auto dir = std::filesystem::temp_directory_path() / "bohr_acceptance";
  std::filesystem::create_directories(dir);
  const std::string fam = (dir / "short_L.json").string();
  write_family(bad_L, fam);
  const int code_L = run_cli("audit-nonrecurrence --depth 2 --family " + fam);
  const int code_tri = run_cli("audit-trichotomy --c2 1/1 --H 1 --denom-max 12 --delta-scale 1000000/1");
  ok = ok && code_L == 1 && code_tri == 1;
  out << "; CLI exit codes " << code_L << ", " << code_tri;
  return {ok, out.str()};
}

}  // namespace

int main() {
  const std::vector<std::tuple<const char*, double, std::function<Outcome()>>> criteria{
      {"AC1 chord bounds", 10, ac1},       {"AC2 dichotomy totality", 60, ac2}, {"AC3 cantor witness", 5, ac3},
      {"AC4 r=1 end-to-end", 120, ac4},    {"AC5 r=2, r=3 structure", 180, ac5}, {"AC6 KL soundness", 60, ac6},
      {"AC7 union", 60, ac7},              {"AC8 mutation sensitivity", 60, ac8},
  };
  bool all = true;
  for (const auto& [name, budget, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < budget;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("%s %s (%.2fs of %.0fs) %s%s\n", pass ? "PASS" : "FAIL", name, secs, budget, o.detail.c_str(),
                in_time ? "" : " [over time budget]");
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
