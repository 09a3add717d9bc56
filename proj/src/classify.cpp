#include "pfreal/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pfreal {

namespace {

double max_imag(std::span<const cplx> x) {
  double m = 0.0;
  for (const auto& z : x) m = std::max(m, std::abs(z.imag()));
  return m;
}

double scale_of(std::span<const cplx> x) {
  double m = 1.0;
  for (const auto& z : x) m = std::max(m, std::abs(z));
  return m;
}

// Max-norm distance relative to max(1, |a|); far-out solutions carry absolute
// errors that grow with their size.
double distance(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d / scale_of(a);
}

CVec flip_vq(std::span<const cplx> x) {
  CVec y(x.begin(), x.end());
  for (std::size_t i = 1; i < y.size(); i += 2) y[i] = -y[i];
  return y;
}

}  // namespace

RealSplit split_real(const std::vector<CVec>& solutions, double real_tol) {
  RealSplit out;
  for (const auto& x : solutions) {
    const double im = max_imag(x) / scale_of(x);
    if (im < real_tol / 10.0) {
      CVec r(x);
      for (auto& z : r) z = z.real();
      out.real.push_back(std::move(r));
    } else {
      if (im <= 10.0 * real_tol) out.ambiguous_imag.push_back(im);
      out.nonreal.push_back(x);
    }
  }
  out.nonreal_even = out.nonreal.size() % 2 == 0;
  return out;
}

RealSplit split_real(const SolutionSet& ss, double real_tol) { return split_real(ss.solutions, real_tol); }

bool is_trivial(const PowerSystem& ps, std::span<const cplx> x, double tol) {
  const auto ids = non_slack_ids(ps);
  if (x.size() != 2 * ids.size()) throw InvalidInput("solution dimension mismatch");
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Bus& b = ps.buses[static_cast<std::size_t>(ids[k] - 1)];
    if (std::abs(x[2 * k + 1]) > tol) return false;
    if (std::abs(std::abs(x[2 * k]) - b.vm) > tol || std::abs(x[2 * k].imag()) > tol) return false;
  }
  return true;
}

TrivialSplit split_trivial(const PowerSystem& ps, const std::vector<CVec>& solutions) {
  TrivialSplit out;
  for (const auto& x : solutions) (is_trivial(ps, x) ? out.trivial : out.nonconstant).push_back(x);
  return out;
}

SymmetryPairing check_symmetry(const std::vector<CVec>& solutions, double tol) {
  SymmetryPairing out;
  std::vector<bool> used(solutions.size(), false);
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (used[i]) continue;
    const CVec target = flip_vq(solutions[i]);
    if (distance(target, solutions[i]) <= tol)
      throw StructuralError("solution " + std::to_string(i + 1) +
                            " has V_q = 0 and is its own (Vd, -Vq) partner");
    std::size_t best = solutions.size();
    double best_d = tol;
    for (std::size_t j = i + 1; j < solutions.size(); ++j) {
      if (used[j]) continue;
      const double d = distance(target, solutions[j]);
      if (d <= best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == solutions.size())
      throw StructuralError("solution " + std::to_string(i + 1) + " has no (Vd, -Vq) partner");
    used[i] = used[best] = true;
    out.pairs.emplace_back(i, best);
    out.max_mismatch = std::max(out.max_mismatch, best_d);
  }
  return out;
}

bool conjugate_closed(const std::vector<CVec>& solutions, double tol) {
  std::vector<bool> used(solutions.size(), false);
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (used[i]) continue;
    CVec c(solutions[i]);
    for (auto& z : c) z = std::conj(z);
    bool found = false;
    for (std::size_t j = i; j < solutions.size(); ++j) {
      if (used[j] || distance(c, solutions[j]) > tol) continue;
      used[i] = used[j] = true;
      found = true;
      break;
    }
    if (!found) return false;
  }
  return true;
}

SolutionRecord make_record(const PowerSystem& ps, std::span<const cplx> x, double real_tol) {
  SolutionRecord r;
  r.is_real = max_imag(x) / scale_of(x) < real_tol / 10.0;
  for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
    r.vd.push_back(x[i].real());
    r.vq.push_back(x[i + 1].real());
  }
  r.is_trivial = is_trivial(ps, x);
  r.residual = residual_norm(build_system(ps), x);
  const auto v = expand_voltages(ps, x);
  const auto inj = injections(ps, v);
  for (const auto& q : inj.q) r.q_out.push_back(q.real());
  r.slack_p = inj.p[static_cast<std::size_t>(slack_bus(ps).id - 1)].real();
  return r;
}

VerifyReport verify(const SolutionRecord& record, const PowerSystem& ps) {
  VerifyReport rep;
  if (!record.is_real) {
    rep.message = "record is not real";
    return rep;
  }
  CVec x;
  for (std::size_t k = 0; k < record.vd.size(); ++k) {
    x.emplace_back(record.vd[k]);
    x.emplace_back(record.vq[k]);
  }
  const auto v = expand_voltages(ps, x);
  const auto inj = injections(ps, v);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    rep.p.push_back(inj.p[i].real());
    rep.q.push_back(inj.q[i].real());
    const Bus& b = ps.buses[i];
    const double vm2 = std::norm(v.vd[i]) + std::norm(v.vq[i]);
    switch (b.kind) {
      case BusKind::slack:
        rep.slack_p = inj.p[i].real();
        break;
      case BusKind::pv:
        rep.max_residual = std::max(rep.max_residual, std::abs(inj.p[i].real() - b.p));
        rep.max_residual = std::max(rep.max_residual, std::abs(vm2 - b.vm * b.vm));
        break;
      case BusKind::pq:
        rep.max_residual = std::max(rep.max_residual, std::abs(inj.p[i].real() - b.p));
        rep.max_residual = std::max(rep.max_residual, std::abs(inj.q[i].real() - b.q));
        break;
    }
  }
  for (const Line& l : ps.lines)
    rep.max_line_flow = std::max(rep.max_line_flow, std::abs(line_flow(l, l.from - 1, l.to - 1, v).real()));
  for (double p : rep.p) rep.power_balance += p;

  std::ostringstream msg;
  rep.ok = true;
  if (rep.max_residual > 1e-7) {
    rep.ok = false;
    msg << "residual " << rep.max_residual << " exceeds 1e-7; ";
  }
  if (ps.lossless() && std::abs(rep.power_balance) > 1e-9) {
    rep.ok = false;
    msg << "lossless power balance off by " << rep.power_balance << "; ";
  }
  rep.message = msg.str();
  return rep;
}

}  // namespace pfreal
