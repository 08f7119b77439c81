#include "kummer/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace kummer {

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"eh_ode", 1e-8},          {"eh_ricci", 1e-10},     {"asd_pairing", 1e-6},     {"asd_pointwise", 1e-8},
      {"gluing_slope0", 0.15},   {"gluing_slope1", 0.2},  {"f_ratio_spread", 2.0},   {"ma_tolerance", 1e-10},
      {"ma_contraction", 0.5},   {"ma_residual", 1e-9},   {"ma_slope_margin", 0.25}, {"forms_constant_ratio", 3.0},
      {"forms_wedge_slope", 0.2}, {"bubbling_fraction", 0.1}};
  return t;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string join(const std::vector<double>& v) {
  std::vector<std::string> s;
  for (double x : v) s.push_back(fmt(x));
  return join(s);
}

double to_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw ConfigError("not a number: '" + t + "'");
  return v;
}

int to_int(const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw ConfigError("not an integer: '" + t + "'");
  return static_cast<int>(v);
}

Rational to_rational(const std::string& text) {
  Rational q;
  if (q.set_str(trim(text), 10) != 0) throw ConfigError("not a rational: '" + trim(text) + "'");
  q.canonicalize();
  return q;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(to_double(s));
  return out;
}

LatticeGroupPair RunConfig::pair() const {
  LatticeGroupPair p;
  p.lattice_basis = ExactMatrix(2, 4);
  for (int j = 0; j < 4; ++j) {
    const auto zw = split_list(lattice[j]);
    if (zw.size() != 2) throw ConfigError("lattice vector " + std::to_string(j + 1) + " needs two entries");
    for (int c = 0; c < 2; ++c) p.lattice_basis(c, j) = parse_exact(zw[c]);
  }
  for (const auto& g : generators) {
    const auto rows = split_list(g, ';');
    if (rows.size() != 2) throw ConfigError("generator '" + g + "' needs two rows");
    ExactMatrix m(2, 2);
    for (int r = 0; r < 2; ++r) {
      const auto e = split_list(rows[r]);
      if (e.size() != 2) throw ConfigError("generator '" + g + "' needs two entries per row");
      for (int c = 0; c < 2; ++c) m(r, c) = parse_exact(e[c]);
    }
    p.generators.push_back(m);
  }
  return p;
}

std::vector<Rational> RunConfig::ledger_eps_values() const {
  std::vector<Rational> out;
  for (const auto& s : ledger_eps) out.push_back(to_rational(s));
  return out;
}

RadialGrid RunConfig::model_grid() const {
  if (s_min <= 0.0 && s_max <= 0.0) return RadialGrid::default_for(a);
  return RadialGrid::log_spaced(s_min, s_max, grid_size);
}

double RunConfig::tolerance(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + key + "'");
  return it->second;
}

bool RunConfig::stage_enabled(const std::string& stage) const {
  return std::find(stages.begin(), stages.end(), stage) != stages.end();
}

void validate_config(const RunConfig& c) {
  for (const auto& [k, v] : c.tolerances)
    if (!(v > 0.0)) throw ConfigError("tolerance '" + k + "' must be positive");
  if (c.eps_list.empty()) throw ConfigError("eps_list is empty");
  if (c.ma_eps_list.empty()) throw ConfigError("ma_eps_list is empty");
  if (!strictly_decreasing(c.eps_list)) throw ConfigError("eps_list must be strictly decreasing");
  if (!strictly_decreasing(c.ma_eps_list)) throw ConfigError("ma_eps_list must be strictly decreasing");
  for (double e : c.eps_list)
    if (!(e > 0.0)) throw ConfigError("epsilons must be positive");
  if (c.deltas.empty()) throw ConfigError("delta list is empty");
  if (!(c.a >= 0.0)) throw ConfigError("a must be non-negative");
  if (c.grid_size < 16) throw ConfigError("grid_size must be at least 16");
  if ((c.s_min > 0.0) != (c.s_max > 0.0) || (c.s_min > 0.0 && !(c.s_min < c.s_max)))
    throw ConfigError("s_min and s_max must both be set with s_min < s_max");
  for (const auto& s : c.stages)
    if (std::find(all_stages().begin(), all_stages().end(), s) == all_stages().end())
      throw ConfigError("unknown stage '" + s + "'");
  if (c.generators.empty()) throw ConfigError("at least one generator is required");
  try {
    c.pair();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad exact scalar: ") + e.what());
  }
  for (const auto& e : c.ledger_eps_values())
    if (sgn(e) < 0) throw ConfigError("ledger epsilons must be non-negative");
  if (!c.vol_T.empty() && sgn(to_rational(c.vol_T)) <= 0) throw ConfigError("vol_T must be positive");
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  std::string section, line;
  int lineno = 0;
  bool generators_seen = false;
  std::map<std::string, bool> lattice_seen;
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (section == "run") {
        if (key == "name") c.name = value;
        else if (key == "out") c.out_dir = value;
        else if (key == "stages") c.stages = split_list(value);
        else if (key == "seed") c.seed = static_cast<unsigned>(to_int(value));
        else throw fail("unknown key '" + key + "'");
      } else if (section == "lattice") {
        if (key.size() != 2 || key[0] != 'v' || key[1] < '1' || key[1] > '4') throw fail("lattice keys are v1..v4");
        c.lattice[key[1] - '1'] = value;
        lattice_seen[key] = true;
      } else if (section == "group") {
        if (key != "generator") throw fail("unknown key '" + key + "'");
        if (!generators_seen) c.generators.clear();
        generators_seen = true;
        c.generators.push_back(value);
      } else if (section == "model") {
        if (key == "a") c.a = to_double(value);
        else if (key == "grid_size") c.grid_size = to_int(value);
        else if (key == "s_min") c.s_min = to_double(value);
        else if (key == "s_max") c.s_max = to_double(value);
        else throw fail("unknown key '" + key + "'");
      } else if (section == "sweep") {
        if (key == "eps") c.eps_list = parse_double_list(value);
        else if (key == "ma_eps") c.ma_eps_list = parse_double_list(value);
        else if (key == "delta") c.deltas = parse_double_list(value);
        else if (key == "ledger_eps") c.ledger_eps = split_list(value);
        else throw fail("unknown key '" + key + "'");
      } else if (section == "ledger") {
        if (key == "vol_T") c.vol_T = value;
        else throw fail("unknown key '" + key + "'");
      } else if (section == "tolerances") {
        if (!default_tolerances().count(key)) throw fail("unknown tolerance '" + key + "'");
        c.tolerances[key] = to_double(value);
      } else if (section == "expect") {
        if (key == "points") c.expect_points = to_int(value);
        else if (key == "d_gamma") c.expect_d_gamma = to_int(value);
        else if (key == "count") c.expect_count = to_int(value);
        else if (key == "type") c.expect_types.push_back(value);
        else if (key == "point") {
          const auto colon = value.rfind(':');
          if (colon == std::string::npos) throw fail("point needs 'z, w : group'");
          c.expect_point.push_back({trim(value.substr(0, colon)), trim(value.substr(colon + 1))});
        } else throw fail("unknown key '" + key + "'");
      } else {
        throw fail(section.empty() ? "key outside a section" : "unknown section '" + section + "'");
      }
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind(source + ":", 0) == 0) throw;
      throw fail(what);
    }
  }
  if (!lattice_seen.empty() && lattice_seen.size() != 4) throw ConfigError(source + ": [lattice] needs v1..v4");
  try {
    validate_config(c);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in, path);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[run]\nname = " << c.name << "\nout = " << c.out_dir << "\nstages = " << join(c.stages)
     << "\nseed = " << c.seed << "\n\n[lattice]\n";
  for (int j = 0; j < 4; ++j) os << "v" << j + 1 << " = " << c.lattice[j] << "\n";
  os << "\n[group]\n";
  for (const auto& g : c.generators) os << "generator = " << g << "\n";
  os << "\n[model]\na = " << fmt(c.a) << "\ngrid_size = " << c.grid_size << "\n";
  if (c.s_min > 0.0) os << "s_min = " << fmt(c.s_min) << "\ns_max = " << fmt(c.s_max) << "\n";
  os << "\n[sweep]\neps = " << join(c.eps_list) << "\nma_eps = " << join(c.ma_eps_list) << "\ndelta = " << join(c.deltas)
     << "\nledger_eps = " << join(c.ledger_eps) << "\n";
  if (!c.vol_T.empty()) os << "\n[ledger]\nvol_T = " << c.vol_T << "\n";
  os << "\n[tolerances]\n";
  for (const auto& [k, v] : c.tolerances) os << k << " = " << fmt(v) << "\n";
  const bool expect = c.expect_points || c.expect_d_gamma || c.expect_count || !c.expect_types.empty() ||
                      !c.expect_point.empty();
  if (expect) {
    os << "\n[expect]\n";
    if (c.expect_points) os << "points = " << *c.expect_points << "\n";
    if (c.expect_d_gamma) os << "d_gamma = " << *c.expect_d_gamma << "\n";
    if (c.expect_count) os << "count = " << *c.expect_count << "\n";
    for (const auto& t : c.expect_types) os << "type = " << t << "\n";
    for (const auto& p : c.expect_point) os << "point = " << p.point << " : " << p.group << "\n";
  }
  return os.str();
}

}  // namespace kummer
