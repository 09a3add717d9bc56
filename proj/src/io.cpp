#include "pfreal/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pfreal/errors.hpp"

namespace pfreal {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw JsonError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw JsonError("unknown field '" + key + "' in " + where);
}

double number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw JsonError(std::string("field '") + key + "' in " + where + " must be a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw JsonError(std::string("missing field '") + key + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw JsonError(std::string("field '") + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

BusKind parse_kind(const json& v, const std::string& where) {
  if (!v.is_string()) throw JsonError("bus type in " + where + " must be a string");
  const auto s = v.get<std::string>();
  if (s == "slack") return BusKind::slack;
  if (s == "pv") return BusKind::pv;
  if (s == "pq") return BusKind::pq;
  throw JsonError("unknown bus type '" + s + "' in " + where);
}

// Rounded to the printed precision so JSON and CSV agree, with -0 folded to 0.
double rounded(double v) {
  const double r = std::round(v * 1e10) / 1e10;
  return r == 0.0 ? 0.0 : r;
}

}  // namespace

PowerSystem parse_system_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw JsonError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, {"buses", "lines"}, "system");
  if (!doc.contains("buses") || !doc["buses"].is_array()) throw JsonError("system needs a 'buses' array");
  if (!doc.contains("lines") || !doc["lines"].is_array()) throw JsonError("system needs a 'lines' array");

  PowerSystem ps;
  std::size_t k = 0;
  for (const json& jb : doc["buses"]) {
    const std::string where = "bus entry " + std::to_string(++k);
    reject_unknown(jb, {"id", "type", "vm", "p", "q"}, where);
    Bus b;
    b.id = integer(jb, "id", where);
    if (!jb.contains("type")) throw JsonError("missing field 'type' in " + where);
    b.kind = parse_kind(jb["type"], where);
    if (b.kind != BusKind::pq && !jb.contains("vm")) throw JsonError("missing field 'vm' in " + where);
    if (b.kind == BusKind::slack && (jb.contains("p") || jb.contains("q")))
      throw JsonError("slack bus in " + where + " takes no injections");
    if (b.kind == BusKind::pv && jb.contains("q")) throw JsonError("PV bus in " + where + " takes no 'q'");
    if (b.kind == BusKind::pq && jb.contains("vm")) throw JsonError("PQ bus in " + where + " takes no 'vm'");
    b.vm = number(jb, "vm", 1.0, where);
    b.p = number(jb, "p", 0.0, where);
    b.q = number(jb, "q", 0.0, where);
    ps.buses.push_back(b);
  }
  std::sort(ps.buses.begin(), ps.buses.end(), [](const Bus& a, const Bus& b) { return a.id < b.id; });

  k = 0;
  for (const json& jl : doc["lines"]) {
    const std::string where = "line entry " + std::to_string(++k);
    reject_unknown(jl, {"from", "to", "b", "g"}, where);
    Line l;
    l.from = integer(jl, "from", where);
    l.to = integer(jl, "to", where);
    if (!jl.contains("b")) throw JsonError("missing field 'b' in " + where);
    l.b = number(jl, "b", 0.0, where);
    l.g = number(jl, "g", 0.0, where);
    ps.lines.push_back(l);
  }
  validate(ps);
  return ps;
}

PowerSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonError("cannot open system file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_json(buf.str());
}

std::string system_to_json(const PowerSystem& ps) {
  ojson j;
  auto buses = ojson::array();
  for (const Bus& b : ps.buses) {
    ojson jb;
    jb["id"] = b.id;
    jb["type"] = to_string(b.kind);
    if (b.kind != BusKind::pq) jb["vm"] = b.vm;
    if (b.kind != BusKind::slack) jb["p"] = b.p;
    if (b.kind == BusKind::pq) jb["q"] = b.q;
    buses.push_back(jb);
  }
  auto lines = ojson::array();
  for (const Line& l : ps.lines) {
    ojson jl;
    jl["from"] = l.from;
    jl["to"] = l.to;
    jl["b"] = l.b;
    if (l.g != 0.0) jl["g"] = l.g;
    lines.push_back(jl);
  }
  j["buses"] = buses;
  j["lines"] = lines;
  return j.dump(2);
}

SolveReport solve_report(const PowerSystem& ps, std::uint64_t seed) {
  validate(ps);
  const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(seed));
  const RealSplit rs = split_real(ss);
  const TrivialSplit ts = split_trivial(ps, rs.real);

  SolveReport r;
  r.n_complex = static_cast<int>(ss.solutions.size());
  r.n_real = static_cast<int>(rs.real.size());
  r.n_trivial = static_cast<int>(ts.trivial.size());
  r.diverged = ss.diverged_count;
  r.failed = ss.failed_count;
  r.ambiguous_imag = rs.ambiguous_imag;
  for (const auto* group : {&ts.trivial, &ts.nonconstant, &rs.nonreal}) {
    std::vector<CVec> g = *group;
    std::sort(g.begin(), g.end(), canonical_less);
    for (auto& x : g) {
      r.records.push_back(make_record(ps, x));
      r.solutions.push_back(std::move(x));
    }
  }
  return r;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string solutions_csv(const PowerSystem& ps, const SolveReport& r) {
  std::string out = "sol_id";
  for (int id : non_slack_ids(ps)) out += ",vd" + std::to_string(id) + ",vq" + std::to_string(id);
  out += ",is_real,is_trivial,residual\n";
  char res[32];
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    out += std::to_string(i + 1);
    for (std::size_t k = 0; k < rec.vd.size(); ++k)
      out += "," + format_fixed(rec.vd[k], 10) + "," + format_fixed(rec.vq[k], 10);
    std::snprintf(res, sizeof res, "%.2e", rec.residual);
    out += std::string(",") + (rec.is_real ? "1" : "0") + "," + (rec.is_trivial ? "1" : "0") + "," + res + "\n";
  }
  return out;
}

std::string solutions_json(const PowerSystem& ps, const SolveReport& r) {
  ojson j;
  j["n_buses"] = ps.size();
  j["n_complex"] = r.n_complex;
  j["n_real"] = r.n_real;
  j["n_trivial"] = r.n_trivial;
  j["complex_bound"] = complex_bound(ps);
  j["diverged_paths"] = r.diverged;
  j["failed_paths"] = r.failed;
  if (!r.ambiguous_imag.empty()) j["ambiguous_imag"] = r.ambiguous_imag;
  auto sols = ojson::array();
  const auto ids = non_slack_ids(ps);
  char res[32];
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& x = r.solutions[i];
    const auto& rec = r.records[i];
    ojson s;
    s["sol_id"] = i + 1;
    auto vd = ojson::object(), vq = ojson::object();
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::string key = std::to_string(ids[k]);
      if (rec.is_real) {
        vd[key] = rounded(x[2 * k].real());
        vq[key] = rounded(x[2 * k + 1].real());
      } else {
        vd[key] = {rounded(x[2 * k].real()), rounded(x[2 * k].imag())};
        vq[key] = {rounded(x[2 * k + 1].real()), rounded(x[2 * k + 1].imag())};
      }
    }
    s["vd"] = vd;
    s["vq"] = vq;
    s["is_real"] = rec.is_real;
    s["is_trivial"] = rec.is_trivial;
    std::snprintf(res, sizeof res, "%.2e", rec.residual);
    s["residual"] = res;
    sols.push_back(s);
  }
  j["solutions"] = sols;
  return j.dump(2);
}

std::string eliminant_json(const PowerSystem& ps, const EliminantCount& ec) {
  const int bus = non_slack_ids(ps)[ec.coordinate / 2];
  ojson j;
  j["variable"] = std::string(ec.coordinate % 2 ? "vq" : "vd") + std::to_string(bus) + "^2";
  j["polynomial"] = ec.poly.format(4);
  auto coeffs = ojson::array();
  const auto c = ec.poly.coeffs_double();
  for (auto it = c.rbegin(); it != c.rend(); ++it) coeffs.push_back(*it);
  j["coefficients_descending"] = coeffs;
  j["descartes_max"] = ec.roots.descartes_max;
  j["sturm_positive"] = ec.roots.sturm_positive;
  j["sturm_negative"] = ec.roots.sturm_negative;
  j["squarefree"] = ec.roots.squarefree;
  j["trivial"] = ec.trivial;
  j["real_via_eliminant"] = ec.via_eliminant;
  j["real_direct"] = ec.direct;
  j["positive_roots_above_one"] = ec.roots_above_one;
  return j.dump(2);
}

}  // namespace pfreal
