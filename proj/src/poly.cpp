#include "pfreal/poly.hpp"

#include <cmath>

namespace pfreal {

XPolySystem to_extended(const PolySystem& sys) {
  std::vector<XPoly> polys;
  for (const auto& p : sys.polys()) {
    std::vector<XPoly::term_type> terms;
    for (const auto& t : p.terms())
      terms.push_back({xcomplex(t.coeff.real(), t.coeff.imag()), t.exponents});
    polys.emplace_back(sys.nvars(), std::move(terms));
  }
  return XPolySystem(std::move(polys));
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double residual_norm(const PolySystem& sys, std::span<const cplx> point) {
  const auto r = evaluate(sys, point);
  return max_abs(r);
}

CompiledSystem::CompiledSystem(const PolySystem& sys) : nvars_(sys.nvars()) {
  int maxdeg = 1;
  poly_start_.push_back(0);
  for (const auto& p : sys.polys()) {
    for (const auto& t : p.terms()) {
      FlatTerm ft{t.coeff, static_cast<int>(factors_.size()), 0};
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (t.exponents[j] == 0) continue;
        factors_.push_back({static_cast<int>(j), t.exponents[j]});
        maxdeg = std::max(maxdeg, t.exponents[j]);
        ++ft.count;
      }
      terms_.push_back(ft);
    }
    poly_start_.push_back(static_cast<int>(terms_.size()));
  }
  stride_ = maxdeg + 1;
}

const cplx* CompiledSystem::fill_powers(const Eigen::VectorXcd& x) const {
  thread_local std::vector<cplx> powers;
  const std::size_t need = nvars_ * static_cast<std::size_t>(stride_);
  if (powers.size() < need) powers.resize(need);
  for (std::size_t j = 0; j < nvars_; ++j) {
    cplx* row = powers.data() + j * static_cast<std::size_t>(stride_);
    row[0] = 1.0;
    for (int e = 1; e < stride_; ++e) row[e] = row[e - 1] * x[static_cast<Eigen::Index>(j)];
  }
  return powers.data();
}

void CompiledSystem::eval(const Eigen::VectorXcd& x, Eigen::VectorXcd& f) const {
  const cplx* pw = fill_powers(x);
  f.resize(static_cast<Eigen::Index>(nvars_));
  for (std::size_t i = 0; i < nvars_; ++i) {
    cplx acc = 0.0;
    for (int k = poly_start_[i]; k < poly_start_[i + 1]; ++k) {
      const FlatTerm& t = terms_[static_cast<std::size_t>(k)];
      cplx m = t.coeff;
      for (int q = 0; q < t.count; ++q) {
        const Factor& fa = factors_[static_cast<std::size_t>(t.first + q)];
        m *= pw[fa.var * stride_ + fa.exp];
      }
      acc += m;
    }
    f[static_cast<Eigen::Index>(i)] = acc;
  }
}

void CompiledSystem::eval_jacobian(const Eigen::VectorXcd& x, Eigen::VectorXcd& f,
                                   Eigen::MatrixXcd& jac) const {
  const cplx* pw = fill_powers(x);
  const auto n = static_cast<Eigen::Index>(nvars_);
  f.resize(n);
  jac.setZero(n, n);
  for (std::size_t i = 0; i < nvars_; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    cplx acc = 0.0;
    for (int k = poly_start_[i]; k < poly_start_[i + 1]; ++k) {
      const FlatTerm& t = terms_[static_cast<std::size_t>(k)];
      const Factor* fs = factors_.data() + t.first;
      cplx m = t.coeff;
      for (int q = 0; q < t.count; ++q) m *= pw[fs[q].var * stride_ + fs[q].exp];
      acc += m;
      for (int q = 0; q < t.count; ++q) {
        cplx d = t.coeff * static_cast<double>(fs[q].exp) * pw[fs[q].var * stride_ + fs[q].exp - 1];
        for (int r = 0; r < t.count; ++r)
          if (r != q) d *= pw[fs[r].var * stride_ + fs[r].exp];
        jac(row, fs[q].var) += d;
      }
    }
    f[row] = acc;
  }
}

}  // namespace pfreal
