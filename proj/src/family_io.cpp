#include "bohr/family_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bohr {

namespace {

Int get_int(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  return parse_integer(j.at(key).get<std::string>());
}

Rat get_rat(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  return parse_rational(j.at(key).get<std::string>());
}

BlockKind parse_kind(const std::string& s) {
  if (s == "Zero") return BlockKind::Zero;
  if (s == "Empty") return BlockKind::Empty;
  if (s == "Subset") return BlockKind::Subset;
  throw Error(ErrorCode::Parse, "unknown block kind '" + s + "'");
}

}  // namespace

Json block_to_json(const BlockSpec& b) {
  Json j;
  j["kind"] = block_kind_name(b.kind);
  j["stage"] = b.stage;
  j["H"] = to_string(b.H);
  switch (b.kind) {
    case BlockKind::Zero:
      j["Q"] = to_string(b.Q);
      break;
    case BlockKind::Empty:
      j["A"] = subset_key(b.A);
      j["Delta"] = to_string(b.Delta);
      break;
    case BlockKind::Subset:
      j["A"] = subset_key(b.A);
      j["Delta"] = to_string(b.Delta);
      j["L"] = to_string(b.L);
      j["Theta"] = to_string(b.Theta);
      j["j_min"] = to_string(b.j_min);
      break;
  }
  j["epsilon"] = to_string(b.epsilon);
  return j;
}

BlockSpec block_from_json(const Json& j) {
  BlockSpec b;
  b.kind = parse_kind(j.at("kind").get<std::string>());
  b.stage = j.at("stage").get<int>();
  b.H = get_int(j, "H");
  b.epsilon = get_rat(j, "epsilon");
  switch (b.kind) {
    case BlockKind::Zero:
      b.Q = get_int(j, "Q");
      break;
    case BlockKind::Empty:
      b.A = parse_subset_key(j.at("A").get<std::string>());
      b.Delta = get_int(j, "Delta");
      break;
    case BlockKind::Subset:
      b.A = parse_subset_key(j.at("A").get<std::string>());
      b.Delta = get_int(j, "Delta");
      b.L = get_int(j, "L");
      b.Theta = get_int(j, "Theta");
      b.j_min = get_int(j, "j_min");
      break;
  }
  return b;
}

Json family_to_json(const SetFamily& family) {
  Json j;
  j["r"] = family.r;
  j["track"] = track_name(family.track);
  Json cfg;
  Json c = Json::object();
  for (const auto& [r, v] : family.config.c) c[std::to_string(r)] = to_string(v);
  cfg["c"] = c;
  cfg["seed"] = std::to_string(family.config.seed);
  cfg["precision_bits"] = family.config.precision.start_bits;
  cfg["precision_cap_bits"] = family.config.precision.cap_bits;
  cfg["grid_denom_max"] = family.config.grid_denom_max;
  cfg["kappa_cap"] = family.config.kappa_cap;
  cfg["gamma_arg_cap"] = family.config.gamma_arg_cap;
  j["config"] = cfg;

  Json stages = Json::array();
  for (const Stage& st : family.stages) {
    Json s;
    s["N"] = st.N;
    s["epsilon"] = to_string(st.epsilon);
    s["L"] = to_string(st.L);
    s["H"] = to_string(st.H);
    s["Q"] = to_string(st.params.Q);
    s["Theta"] = to_string(st.params.Theta);
    s["delta"] = to_string(st.params.delta);
    Json delta = Json::object();
    for (const Subset& a : all_subsets(family.r - 1)) delta[subset_key(a)] = to_string(st.params.Delta.at(a));
    s["Delta"] = delta;
    Json rec = Json::object();
    for (const auto& [k, v] : st.params.record) rec[k] = v;
    s["record"] = rec;
    Json blocks = Json::array();
    for (const BlockSpec& b : st.blocks) blocks.push_back(block_to_json(b));
    s["blocks"] = blocks;
    stages.push_back(s);
  }
  j["stages"] = stages;
  return j;
}

SetFamily family_from_json(const Json& j) {
  try {
    SetFamily fam;
    fam.r = j.at("r").get<int>();
    if (fam.r < 1) throw Error(ErrorCode::Parse, "r must be >= 1");
    fam.track = parse_track(j.at("track").get<std::string>());
    const Json& cfg = j.at("config");
    fam.config.track = fam.track;
    for (const auto& [k, v] : cfg.at("c").items()) {
      fam.config.c[static_cast<int>(parse_integer(k).get_si())] = parse_rational(v.get<std::string>());
    }
    fam.config.seed = std::stoull(cfg.at("seed").get<std::string>());
    fam.config.precision.start_bits = cfg.at("precision_bits").get<unsigned>();
    fam.config.precision.cap_bits = cfg.value("precision_cap_bits", 4096u);
    fam.config.grid_denom_max = cfg.value("grid_denom_max", 64L);
    fam.config.kappa_cap = cfg.value("kappa_cap", 200000UL);
    fam.config.gamma_arg_cap = cfg.value("gamma_arg_cap", 20000UL);

    for (const Json& s : j.at("stages")) {
      Stage st;
      st.N = s.at("N").get<int>();
      st.epsilon = get_rat(s, "epsilon");
      st.L = get_int(s, "L");
      st.H = get_int(s, "H");
      st.params.r = fam.r;
      st.params.epsilon = st.epsilon;
      st.params.L = st.L;
      st.params.Q = get_int(s, "Q");
      st.params.Theta = get_int(s, "Theta");
      st.params.delta = get_rat(s, "delta");
      for (const auto& [k, v] : s.at("Delta").items()) {
        st.params.Delta[parse_subset_key(k)] = parse_integer(v.get<std::string>());
      }
      if (st.params.Delta.size() != (std::size_t(1) << (fam.r - 1))) {
        throw Error(ErrorCode::Parse, "stage " + std::to_string(st.N) + " has the wrong number of Delta keys");
      }
      if (s.contains("record")) {
        for (const auto& [k, v] : s.at("record").items()) st.params.record.emplace_back(k, v.get<std::string>());
      }
      for (const Json& b : s.at("blocks")) st.blocks.push_back(block_from_json(b));
      fam.stages.push_back(std::move(st));
    }
    return fam;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::Parse, std::string("malformed manifest: ") + e.what());
  }
}

std::string dump_manifest(const SetFamily& family) { return family_to_json(family).dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
  out << text;
}

void write_family(const SetFamily& family, const std::string& path) { write_text_file(path, dump_manifest(family)); }

SetFamily read_family(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return family_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "'" + path + "': " + e.what());
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string family_digest(const SetFamily& family) { return fnv1a_hex(dump_manifest(family)); }

}  // namespace bohr
