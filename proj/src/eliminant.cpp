#include "pfreal/eliminant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

namespace pfreal {

namespace {

template <class Real>
Real abs_of(const Real& v) {
  return v < 0 ? Real(-v) : v;
}

template <class Real>
void trim(std::vector<Real>& c, const Real& tol) {
  while (!c.empty() && abs_of(c.back()) <= tol) c.pop_back();
}

template <class Real>
Real max_abs_coeff(const std::vector<Real>& c) {
  Real m = 0;
  for (const auto& v : c) m = std::max(m, abs_of(v));
  return m;
}

// Remainder of a / b (ascending coefficients), b nonzero.
template <class Real>
std::vector<Real> remainder(std::vector<Real> a, const std::vector<Real>& b) {
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const Real q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < db; ++i) a[shift + i] -= q * b[i];
    a.pop_back();
  }
  return a;
}

// +1, -1, or 0 when indistinguishable from zero.
template <class Real>
int sign_of(const Real& v, const Real& tol) {
  if (abs_of(v) <= tol) return 0;
  return v > 0 ? 1 : -1;
}

template <class Real>
std::vector<std::vector<Real>> sturm_chain(const std::vector<Real>& p, const Real& zero_rel) {
  std::vector<std::vector<Real>> chain;
  chain.push_back(p);
  std::vector<Real> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Real(static_cast<double>(i)));
  chain.push_back(d);
  const Real scale = max_abs_coeff(p);
  while (chain.back().size() > 1) {
    std::vector<Real> r = remainder(chain[chain.size() - 2], chain.back());
    for (auto& v : r) v = -v;
    trim(r, zero_rel * scale);
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

enum class Where { minus_inf, finite, plus_inf };

template <class Real>
Real eval(const std::vector<Real>& c, const Real& x) {
  Real acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Sign variations of the chain at a point. Throws PrecisionError on an
// undecidable sign.
template <class Real>
int variations(const std::vector<std::vector<Real>>& chain, Where where, const Real& x, const Real& sign_rel) {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    Real v;
    Real scale;
    switch (where) {
      case Where::plus_inf:
        v = q.back();
        scale = abs_of(q.back());
        break;
      case Where::minus_inf:
        v = (q.size() % 2 == 0) ? Real(-q.back()) : q.back();
        scale = abs_of(q.back());
        break;
      case Where::finite: {
        v = eval(q, x);
        // Scale of the largest term at x.
        Real xp = 1;
        scale = 0;
        for (const auto& c : q) {
          scale = std::max(scale, abs_of(c) * xp);
          xp *= abs_of(x);
        }
        break;
      }
    }
    const int s = sign_of(v, Real(sign_rel * scale));
    if (s == 0) {
      // Only p itself needs a decided sign. A later member that vanishes at a
      // non-root sits between neighbours of opposite sign, so either choice
      // gives the same count.
      if (&q == &chain.front()) throw PrecisionError("Sturm chain sign indistinguishable from zero");
      continue;
    }
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

template <class Real>
int sturm_count_impl(const std::vector<xreal>& coeffs, double a, double b, const Real& zero_rel,
                     const Real& sign_rel) {
  std::vector<Real> p;
  for (const auto& c : coeffs) p.push_back(Real(c));
  const auto chain = sturm_chain(p, zero_rel);
  auto at = [&](double x) {
    if (std::isinf(x)) return variations(chain, x > 0 ? Where::plus_inf : Where::minus_inf, Real(0), sign_rel);
    return variations(chain, Where::finite, Real(x), sign_rel);
  };
  return at(a) - at(b);
}

}  // namespace

UniPoly::UniPoly(std::vector<xreal> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::from_double(const std::vector<double>& ascending) {
  std::vector<xreal> c;
  for (double v : ascending) c.emplace_back(v);
  return UniPoly(std::move(c));
}

UniPoly UniPoly::from_roots(const std::vector<double>& roots) {
  std::vector<xreal> c{xreal(1)};
  for (double r : roots) {
    std::vector<xreal> next(c.size() + 1, xreal(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * xreal(r);
    }
    c = std::move(next);
  }
  return UniPoly(std::move(c));
}

std::vector<double> UniPoly::coeffs_double() const {
  std::vector<double> out;
  for (const auto& c : coeffs_) out.push_back(c.convert_to<double>());
  return out;
}

UniPoly UniPoly::monic() const {
  if (coeffs_.empty()) throw InvalidInput("zero polynomial has no monic form");
  std::vector<xreal> c = coeffs_;
  const xreal lead = c.back();
  for (auto& v : c) v /= lead;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::derivative() const {
  std::vector<xreal> c;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) c.push_back(coeffs_[i] * xreal(static_cast<double>(i)));
  return UniPoly(std::move(c));
}

xreal UniPoly::operator()(const xreal& x) const { return eval(coeffs_, x); }

double UniPoly::operator()(double x) const { return eval(coeffs_, xreal(x)).convert_to<double>(); }

std::string UniPoly::format(int decimals) const {
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const double c = coeffs_[static_cast<std::size_t>(k)].convert_to<double>();
    if (c == 0.0) continue;
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const bool unit = std::abs(mag - 1.0) < 1e-15 && k > 0;
    if (!unit) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", decimals, mag);
      out << buf;
      if (k > 0) out << " ";
    }
    if (k == 1) out << "x";
    if (k > 1) out << "x^" << k;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

int descartes(const UniPoly& p) {
  int changes = 0;
  int last = 0;
  for (const auto& c : p.coeffs()) {
    if (c == 0) continue;
    const int s = c > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int sturm_count(const UniPoly& p, double a, double b) {
  if (p.is_zero()) throw InvalidInput("Sturm count of the zero polynomial");
  if (!(a < b)) throw InvalidInput("Sturm interval must satisfy a < b");
  try {
    return sturm_count_impl<xreal>(p.coeffs(), a, b, xreal(1e-30), xreal(1e-20));
  } catch (const PrecisionError&) {
    return sturm_count_impl<xreal_wide>(p.coeffs(), a, b, xreal_wide(1e-60), xreal_wide(1e-40));
  }
}

namespace {

// Roots exactly at zero are neither positive nor negative; divide them out.
UniPoly deflate_zero_roots(const UniPoly& p) {
  std::vector<xreal> c = p.coeffs();
  std::size_t k = 0;
  while (k + 1 < c.size() && c[k] == 0) ++k;
  return UniPoly(std::vector<xreal>(c.begin() + static_cast<std::ptrdiff_t>(k), c.end()));
}

}  // namespace

int sturm_positive(const UniPoly& p) {
  return sturm_count(deflate_zero_roots(p), 0.0, std::numeric_limits<double>::infinity());
}

int sturm_negative(const UniPoly& p) {
  return sturm_count(deflate_zero_roots(p), -std::numeric_limits<double>::infinity(), 0.0);
}

int numeric_gcd_degree(const UniPoly& p, double threshold) {
  const int n = p.degree();
  if (n < 1) return 0;
  const UniPoly d = p.derivative();
  const int m = n - 1;
  const auto pc = p.coeffs_double();
  const auto dc = d.coeffs_double();
  // Sylvester matrix of p (degree n) and p' (degree m): m shifted rows of p, n of p'.
  const int size = n + m;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) s(r, r + k) = pc[static_cast<std::size_t>(n - k)];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s(m + r, r + k) = dc[static_cast<std::size_t>(m - k)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
  const auto& sv = svd.singularValues();
  int small = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] < threshold * sv[0]) ++small;
  return small;
}

RootCount count_roots(const UniPoly& p) {
  RootCount rc;
  rc.descartes_max = descartes(p);
  rc.sturm_positive = sturm_positive(p);
  rc.sturm_negative = sturm_negative(p);
  rc.agrees = rc.sturm_positive <= rc.descartes_max && (rc.descartes_max - rc.sturm_positive) % 2 == 0;
  rc.numeric_gcd_degree = numeric_gcd_degree(p);
  rc.squarefree = rc.numeric_gcd_degree == 0;
  return rc;
}

UniPoly build_eliminant(const std::vector<CVec>& nonconstant, std::size_t coord_index) {
  if (nonconstant.size() % 2 != 0)
    throw StructuralError("eliminant needs an even number of nonconstant solutions, got " +
                          std::to_string(nonconstant.size()));
  if (nonconstant.empty()) return UniPoly({xreal(1)});
  if (coord_index >= nonconstant.front().size()) throw InvalidInput("coordinate index out of range");
  const auto pairing = check_symmetry(nonconstant);

  std::vector<cplx> values;
  for (const auto& pr : pairing.pairs) {
    const cplx v = nonconstant[pr.first][coord_index];
    values.push_back(v * v);
  }
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (std::abs(values[i] - values[j]) <= 1e-10 * std::max({1.0, std::abs(values[i]), std::abs(values[j])}))
        throw NonGenericCoordinate("coordinate " + std::to_string(coord_index) +
                                   " does not separate the solution pairs");

  // Elementary symmetric functions via the product of (x - v_j).
  std::vector<xcomplex> c{xcomplex(1)};
  for (const cplx& v : values) {
    const xcomplex xv(v.real(), v.imag());
    std::vector<xcomplex> next(c.size() + 1, xcomplex(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * xv;
    }
    c = std::move(next);
  }
  double coeff_scale = 1.0;
  for (const auto& z : c) coeff_scale = std::max(coeff_scale, abs_of(boost::multiprecision::real(z)).convert_to<double>());
  std::vector<xreal> coeffs;
  for (const auto& z : c) {
    const xreal re = boost::multiprecision::real(z);
    const xreal im = boost::multiprecision::imag(z);
    const double im_mag = abs_of(im).convert_to<double>();
    if (im_mag > 1e-8 * coeff_scale)
      throw StructuralError("eliminant coefficient keeps imaginary part " + std::to_string(im_mag));
    coeffs.push_back(re);
  }
  return UniPoly(std::move(coeffs));
}

UniPoly build_eliminant_any(const std::vector<CVec>& nonconstant, std::size_t* used_index) {
  if (nonconstant.empty()) return build_eliminant(nonconstant, 0);
  const std::size_t n = nonconstant.front().size();
  for (std::size_t idx = n; idx >= 2; idx -= 2) {
    try {
      UniPoly p = build_eliminant(nonconstant, idx - 1);
      if (used_index) *used_index = idx - 1;
      return p;
    } catch (const NonGenericCoordinate&) {
    }
  }
  throw NonGenericCoordinate("no V_q coordinate separates the solution pairs");
}

EliminantCount count_real_via_eliminant(const PowerSystem& ps, const SolutionSet& ss, double real_tol) {
  for (const Bus& b : ps.buses) {
    if (b.kind == BusKind::pq) throw InvalidInput("eliminant count needs a PV network");
    if (b.kind == BusKind::pv && b.p != 0.0) throw InvalidInput("eliminant count needs zero injections");
  }
  EliminantCount out;
  const auto split = split_trivial(ps, ss.solutions);
  out.trivial = static_cast<int>(split.trivial.size());
  out.poly = build_eliminant_any(split.nonconstant, &out.coordinate);
  out.roots = count_roots(out.poly);
  out.via_eliminant = out.trivial + 2 * out.roots.sturm_positive;
  out.direct = static_cast<int>(split_real(ss, real_tol).real.size());
  if (out.poly.degree() >= 1) out.roots_above_one = sturm_count(out.poly, 1.0 + 1e-9, std::numeric_limits<double>::infinity());
  if (out.via_eliminant != out.direct)
    throw StructuralError("eliminant count " + std::to_string(out.via_eliminant) +
                          " disagrees with direct count " + std::to_string(out.direct));
  return out;
}

}  // namespace pfreal
