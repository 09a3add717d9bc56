#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pfreal/errors.hpp"
#include "pfreal/scalar.hpp"

namespace pfreal {

// Coefficients whose magnitude falls below this after merging are dropped.
inline constexpr double kMergeTolerance = 1e-14;

template <class Scalar>
struct BasicTerm {
  Scalar coeff{};
  std::vector<int> exponents;

  int total_degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }
};

/// Sparse multivariate polynomial with dense exponent vectors.
///
/// Always held in canonical form: terms sorted by exponent vector, no repeated
/// exponent vector, no coefficient below kMergeTolerance in magnitude. Two
/// polynomials built from permuted term lists therefore compare equal.
template <class Scalar>
class BasicPoly {
 public:
  using scalar_type = Scalar;
  using term_type = BasicTerm<Scalar>;

  explicit BasicPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  BasicPoly(std::size_t nvars, std::vector<term_type> terms)
      : nvars_(nvars), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (t.exponents.size() != nvars_)
        throw InvalidInput("term exponent vector has " + std::to_string(t.exponents.size()) +
                           " entries, polynomial has " + std::to_string(nvars_) + " variables");
      for (int e : t.exponents)
        if (e < 0) throw InvalidInput("negative exponent");
    }
    canonicalize();
  }

  static BasicPoly constant(std::size_t nvars, Scalar c) {
    return BasicPoly(nvars, {term_type{c, std::vector<int>(nvars, 0)}});
  }

  static BasicPoly variable(std::size_t nvars, std::size_t j, Scalar c = Scalar(1)) {
    if (j >= nvars) throw InvalidInput("variable index out of range");
    std::vector<int> e(nvars, 0);
    e[j] = 1;
    return BasicPoly(nvars, {term_type{c, std::move(e)}});
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<term_type>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.total_degree());
    return d;
  }

  Scalar operator()(std::span<const Scalar> x) const {
    if (x.size() != nvars_)
      throw InvalidInput("point has " + std::to_string(x.size()) + " coordinates, expected " +
                         std::to_string(nvars_));
    Scalar acc(0);
    for (const auto& t : terms_) {
      Scalar m = t.coeff;
      for (std::size_t j = 0; j < nvars_; ++j)
        for (int k = 0; k < t.exponents[j]; ++k) m *= x[j];
      acc += m;
    }
    return acc;
  }

  BasicPoly derivative(std::size_t j) const {
    if (j >= nvars_) throw InvalidInput("variable index out of range");
    std::vector<term_type> out;
    for (const auto& t : terms_) {
      if (t.exponents[j] == 0) continue;
      term_type d = t;
      d.coeff = t.coeff * Scalar(t.exponents[j]);
      d.exponents[j] -= 1;
      out.push_back(std::move(d));
    }
    return BasicPoly(nvars_, std::move(out));
  }

  // Terms of maximal total degree only.
  BasicPoly top_form() const {
    const int d = degree();
    std::vector<term_type> out;
    for (const auto& t : terms_)
      if (t.total_degree() == d) out.push_back(t);
    return BasicPoly(nvars_, std::move(out));
  }

  friend BasicPoly operator+(const BasicPoly& a, const BasicPoly& b) {
    check_same(a, b);
    std::vector<term_type> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return BasicPoly(a.nvars_, std::move(t));
  }

  friend BasicPoly operator-(const BasicPoly& a) {
    std::vector<term_type> t = a.terms_;
    for (auto& x : t) x.coeff = -x.coeff;
    return BasicPoly(a.nvars_, std::move(t));
  }

  friend BasicPoly operator-(const BasicPoly& a, const BasicPoly& b) { return a + (-b); }

  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    check_same(a, b);
    std::vector<term_type> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        term_type p{x.coeff * y.coeff, x.exponents};
        for (std::size_t j = 0; j < a.nvars_; ++j) p.exponents[j] += y.exponents[j];
        t.push_back(std::move(p));
      }
    return BasicPoly(a.nvars_, std::move(t));
  }

  friend BasicPoly operator*(Scalar c, const BasicPoly& a) {
    std::vector<term_type> t = a.terms_;
    for (auto& x : t) x.coeff *= c;
    return BasicPoly(a.nvars_, std::move(t));
  }

  friend bool operator==(const BasicPoly& a, const BasicPoly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].exponents != b.terms_[i].exponents || a.terms_[i].coeff != b.terms_[i].coeff)
        return false;
    return true;
  }

 private:
  static void check_same(const BasicPoly& a, const BasicPoly& b) {
    if (a.nvars_ != b.nvars_) throw InvalidInput("polynomials live in different variable counts");
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const term_type& a, const term_type& b) { return a.exponents < b.exponents; });
    std::vector<term_type> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().exponents == t.exponents)
        merged.back().coeff += t.coeff;
      else
        merged.push_back(std::move(t));
    }
    using std::abs;
    std::erase_if(merged, [](const term_type& t) { return !(abs(t.coeff) >= kMergeTolerance); });
    terms_ = std::move(merged);
  }

  std::size_t nvars_;
  std::vector<term_type> terms_;
};

/// Square polynomial system: as many polynomials as variables.
template <class Scalar>
class BasicPolySystem {
 public:
  using poly_type = BasicPoly<Scalar>;

  BasicPolySystem() = default;

  explicit BasicPolySystem(std::vector<poly_type> polys) : polys_(std::move(polys)) {
    nvars_ = polys_.empty() ? 0 : polys_.front().nvars();
    for (const auto& p : polys_)
      if (p.nvars() != nvars_) throw InvalidInput("polynomials disagree on variable count");
    if (polys_.size() != nvars_)
      throw InvalidInput("system is not square: " + std::to_string(polys_.size()) +
                         " polynomials in " + std::to_string(nvars_) + " variables");
  }

  // Zero system in n variables.
  static BasicPolySystem zero(std::size_t n) {
    return BasicPolySystem(std::vector<poly_type>(n, poly_type(n)));
  }

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return polys_.size(); }
  const poly_type& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<poly_type>& polys() const { return polys_; }

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& p : polys_) d.push_back(p.degree());
    return d;
  }

  // Product of the degrees; 0 if any polynomial is zero or constant.
  long long total_degree() const {
    long long prod = 1;
    for (int d : degrees()) prod *= std::max(d, 0);
    return prod;
  }

  friend bool operator==(const BasicPolySystem&, const BasicPolySystem&) = default;

 private:
  std::size_t nvars_ = 0;
  std::vector<poly_type> polys_;
};

using Term = BasicTerm<cplx>;
using Poly = BasicPoly<cplx>;
using PolySystem = BasicPolySystem<cplx>;
using XPoly = BasicPoly<xcomplex>;
using XPolySystem = BasicPolySystem<xcomplex>;

template <class Scalar>
std::vector<Scalar> evaluate(const BasicPolySystem<Scalar>& sys, std::span<const Scalar> point) {
  if (point.size() != sys.nvars())
    throw InvalidInput("point has " + std::to_string(point.size()) + " coordinates, system has " +
                       std::to_string(sys.nvars()) + " variables");
  std::vector<Scalar> out;
  out.reserve(sys.size());
  for (const auto& p : sys.polys()) out.push_back(p(point));
  return out;
}

template <class Scalar>
std::vector<std::vector<BasicPoly<Scalar>>> jacobian(const BasicPolySystem<Scalar>& sys) {
  std::vector<std::vector<BasicPoly<Scalar>>> jac(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = 0; j < sys.nvars(); ++j) jac[i].push_back(sys[i].derivative(j));
  return jac;
}

template <class Scalar>
BasicPolySystem<Scalar> top_form(const BasicPolySystem<Scalar>& sys) {
  std::vector<BasicPoly<Scalar>> out;
  for (const auto& p : sys.polys()) out.push_back(p.top_form());
  return BasicPolySystem<Scalar>(std::move(out));
}

// Lift a double-precision system into the extended-precision scalar.
XPolySystem to_extended(const PolySystem& sys);

double max_abs(std::span<const cplx> v);
double residual_norm(const PolySystem& sys, std::span<const cplx> point);

/// Flattened evaluator for the hot path of path tracking: sparse (var, exp)
/// factor lists over a thread-local power table. Immutable after
/// construction, so one instance can be shared by concurrent trackers.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  explicit CompiledSystem(const PolySystem& sys);

  std::size_t nvars() const { return nvars_; }

  void eval(const Eigen::VectorXcd& x, Eigen::VectorXcd& f) const;
  void eval_jacobian(const Eigen::VectorXcd& x, Eigen::VectorXcd& f, Eigen::MatrixXcd& jac) const;

 private:
  struct Factor {
    int var;
    int exp;
  };
  struct FlatTerm {
    cplx coeff;
    int first;  // index into factors_
    int count;
  };

  const cplx* fill_powers(const Eigen::VectorXcd& x) const;

  std::size_t nvars_ = 0;
  int stride_ = 1;
  std::vector<int> poly_start_;  // size nvars_+1, offsets into terms_
  std::vector<FlatTerm> terms_;
  std::vector<Factor> factors_;
};

}  // namespace pfreal
