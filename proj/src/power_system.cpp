#include "pfreal/power_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace pfreal {

std::string to_string(BusKind k) {
  switch (k) {
    case BusKind::slack:
      return "slack";
    case BusKind::pv:
      return "pv";
    case BusKind::pq:
      return "pq";
  }
  return "?";
}

bool PowerSystem::lossless() const {
  return std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.g == 0.0; });
}

void validate(const PowerSystem& ps) {
  const int n = static_cast<int>(ps.buses.size());
  if (n < 2) throw InvalidInput("a network needs at least two buses");
  int slacks = 0;
  for (int i = 0; i < n; ++i) {
    const Bus& b = ps.buses[static_cast<std::size_t>(i)];
    if (b.id != i + 1) throw InvalidInput("bus ids must be 1..n in order; found id " + std::to_string(b.id) +
                                          " at position " + std::to_string(i + 1));
    if (b.kind == BusKind::slack) ++slacks;
    if (b.kind != BusKind::pq && !(b.vm > 0.0))
      throw InvalidInput("bus " + std::to_string(b.id) + " has nonpositive voltage magnitude");
  }
  if (slacks != 1) throw InvalidInput("expected exactly one slack bus, found " + std::to_string(slacks));
  std::set<std::pair<int, int>> seen;
  for (const Line& l : ps.lines) {
    if (l.from < 1 || l.from > n || l.to < 1 || l.to > n)
      throw InvalidInput("line references unknown bus " + std::to_string(l.from) + "-" + std::to_string(l.to));
    if (l.from == l.to) throw InvalidInput("line connects bus " + std::to_string(l.from) + " to itself");
    if (l.g < 0.0) throw InvalidInput("negative line conductance");
    auto key = std::minmax(l.from, l.to);
    if (!seen.insert(key).second)
      throw InvalidInput("duplicate line between buses " + std::to_string(key.first) + " and " +
                         std::to_string(key.second));
  }
}

const Bus& slack_bus(const PowerSystem& ps) {
  for (const Bus& b : ps.buses)
    if (b.kind == BusKind::slack) return b;
  throw InvalidInput("no slack bus");
}

std::vector<int> non_slack_ids(const PowerSystem& ps) {
  std::vector<int> ids;
  for (const Bus& b : ps.buses)
    if (b.kind != BusKind::slack) ids.push_back(b.id);
  return ids;
}

NetworkCoefficients coefficients(const PowerSystem& ps) {
  validate(ps);
  NetworkCoefficients net;
  for (const Bus& b : ps.buses) {
    net.kinds.push_back(b.kind);
    net.vm.push_back(b.vm);
    net.p.emplace_back(b.p);
    net.q.emplace_back(b.q);
  }
  for (const Line& l : ps.lines) net.edges.push_back({l.from - 1, l.to - 1, cplx(l.b), cplx(l.g)});
  return net;
}

namespace {

// Rectangular voltage of one bus as polynomials in the reduced variables.
struct VoltagePolys {
  Poly vd;
  Poly vq;
};

std::vector<VoltagePolys> voltage_polys(const NetworkCoefficients& net, std::size_t nvars) {
  std::vector<VoltagePolys> v;
  std::size_t var = 0;
  for (std::size_t i = 0; i < net.kinds.size(); ++i) {
    if (net.kinds[i] == BusKind::slack) {
      v.push_back({Poly::constant(nvars, net.vm[i]), Poly(nvars)});
    } else {
      v.push_back({Poly::variable(nvars, var), Poly::variable(nvars, var + 1)});
      var += 2;
    }
  }
  return v;
}

}  // namespace

PolySystem build_system(const NetworkCoefficients& net) {
  const std::size_t n = net.kinds.size();
  if (std::count(net.kinds.begin(), net.kinds.end(), BusKind::slack) != 1)
    throw InvalidInput("expected exactly one slack bus");
  const std::size_t nvars = 2 * (n - 1);
  const auto v = voltage_polys(net, nvars);

  // Per-bus sums of line flows. With B_ik = b_ik, B_ii = -sum b_ik, G_ik = -g_ik,
  // G_ii = sum g_ik:
  //   p_flow(i->k) = g (Vdi^2 + Vqi^2 - Vdi Vdk - Vqi Vqk) + b (Vqi Vdk - Vdi Vqk)
  //   q_flow(i->k) = b (Vdi^2 + Vqi^2 - Vdi Vdk - Vqi Vqk) + g (Vdi Vqk - Vqi Vdk)
  std::vector<Poly> p_sum(n, Poly(nvars)), q_sum(n, Poly(nvars));
  for (const auto& e : net.edges) {
    for (int dir = 0; dir < 2; ++dir) {
      const auto i = static_cast<std::size_t>(dir == 0 ? e.from : e.to);
      const auto k = static_cast<std::size_t>(dir == 0 ? e.to : e.from);
      const Poly self = v[i].vd * v[i].vd + v[i].vq * v[i].vq;
      const Poly cross = v[i].vd * v[k].vd + v[i].vq * v[k].vq;
      const Poly sine = v[i].vq * v[k].vd - v[i].vd * v[k].vq;
      p_sum[i] = p_sum[i] + e.g * (self - cross) + e.b * sine;
      q_sum[i] = q_sum[i] + e.b * (self - cross) + (-e.g) * sine;
    }
  }

  std::vector<Poly> polys;
  for (std::size_t i = 0; i < n; ++i) {
    const Poly one = Poly::constant(nvars, 1.0);
    switch (net.kinds[i]) {
      case BusKind::slack:
        break;
      case BusKind::pv:
        polys.push_back(p_sum[i] - net.p[i] * one);
        polys.push_back(v[i].vd * v[i].vd + v[i].vq * v[i].vq - (net.vm[i] * net.vm[i]) * one);
        break;
      case BusKind::pq:
        polys.push_back(p_sum[i] - net.p[i] * one);
        polys.push_back(q_sum[i] - net.q[i] * one);
        break;
    }
  }
  return PolySystem(std::move(polys));
}

PolySystem build_system(const PowerSystem& ps) { return build_system(coefficients(ps)); }

PowerSystem normalize_vm(const PowerSystem& ps) {
  validate(ps);
  for (const Bus& b : ps.buses)
    if (b.kind == BusKind::pq) throw InvalidInput("normalize_vm supports slack and PV buses only");
  if (!ps.lossless()) throw InvalidInput("normalize_vm supports lossless networks only");
  PowerSystem out = ps;
  for (Line& l : out.lines)
    l.b *= ps.buses[static_cast<std::size_t>(l.from - 1)].vm * ps.buses[static_cast<std::size_t>(l.to - 1)].vm;
  for (Bus& b : out.buses) b.vm = 1.0;
  return out;
}

std::uint64_t complex_bound(int n) {
  if (n < 2) throw InvalidInput("bound needs n >= 2");
  const int m = n - 1;
  std::uint64_t c = 1;
  for (int k = 1; k <= m; ++k) c = c * static_cast<std::uint64_t>(m + k) / static_cast<std::uint64_t>(k);
  return c;
}

std::uint64_t complex_bound(const PowerSystem& ps) { return complex_bound(static_cast<int>(ps.size())); }

std::uint64_t bezout_bound(int n) {
  if (n < 2) throw InvalidInput("bound needs n >= 2");
  if (2 * n - 2 >= 64) throw InvalidInput("Bezout number overflows 64 bits");
  return std::uint64_t{1} << (2 * n - 2);
}

std::uint64_t bezout_bound(const PowerSystem& ps) { return bezout_bound(static_cast<int>(ps.size())); }

BusVoltages expand_voltages(const PowerSystem& ps, std::span<const cplx> point) {
  if (point.size() != 2 * (ps.size() - 1))
    throw InvalidInput("solution has " + std::to_string(point.size()) + " coordinates, expected " +
                       std::to_string(2 * (ps.size() - 1)));
  BusVoltages v;
  std::size_t var = 0;
  for (const Bus& b : ps.buses) {
    if (b.kind == BusKind::slack) {
      v.vd.emplace_back(b.vm);
      v.vq.emplace_back(0.0);
    } else {
      v.vd.push_back(point[var]);
      v.vq.push_back(point[var + 1]);
      var += 2;
    }
  }
  return v;
}

cplx line_flow(const Line& line, int i, int k, const BusVoltages& v) {
  const auto a = static_cast<std::size_t>(i);
  const auto c = static_cast<std::size_t>(k);
  const cplx self = v.vd[a] * v.vd[a] + v.vq[a] * v.vq[a];
  const cplx cross = v.vd[a] * v.vd[c] + v.vq[a] * v.vq[c];
  const cplx sine = v.vq[a] * v.vd[c] - v.vd[a] * v.vq[c];
  return line.g * (self - cross) + line.b * sine;
}

Injections injections(const PowerSystem& ps, const BusVoltages& v) {
  const std::size_t n = ps.size();
  Injections out{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (const Line& l : ps.lines) {
    for (int dir = 0; dir < 2; ++dir) {
      const int i = (dir == 0 ? l.from : l.to) - 1;
      const int k = (dir == 0 ? l.to : l.from) - 1;
      const auto a = static_cast<std::size_t>(i);
      const auto c = static_cast<std::size_t>(k);
      const cplx self = v.vd[a] * v.vd[a] + v.vq[a] * v.vq[a];
      const cplx cross = v.vd[a] * v.vd[c] + v.vq[a] * v.vq[c];
      const cplx sine = v.vq[a] * v.vd[c] - v.vd[a] * v.vq[c];
      out.p[a] += line_flow(l, i, k, v);
      out.q[a] += l.b * (self - cross) - l.g * sine;
    }
  }
  return out;
}

std::vector<double> polar_active_injections(const PowerSystem& ps, std::span<const double> angles) {
  if (angles.size() != ps.size()) throw InvalidInput("one angle per bus expected");
  std::vector<double> p(ps.size(), 0.0);
  for (const Line& l : ps.lines) {
    for (int dir = 0; dir < 2; ++dir) {
      const auto i = static_cast<std::size_t>((dir == 0 ? l.from : l.to) - 1);
      const auto k = static_cast<std::size_t>((dir == 0 ? l.to : l.from) - 1);
      const double vi = ps.buses[i].vm;
      const double vk = ps.buses[k].vm;
      const double th = angles[i] - angles[k];
      // G_ii |Vi|^2 contributes g vi^2 per incident line; G_ik = -g.
      p[i] += l.g * vi * vi - vi * vk * l.g * std::cos(th) + vi * vk * l.b * std::sin(th);
    }
  }
  return p;
}

}  // namespace pfreal
