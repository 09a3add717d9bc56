#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pfreal/classify.hpp"
#include "pfreal/scalar.hpp"

namespace pfreal {

// The chosen coordinate does not separate the solution pairs.
class NonGenericCoordinate : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

/// Real univariate polynomial, coefficients in ascending degree, 128-bit.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<xreal> ascending);
  static UniPoly from_double(const std::vector<double>& ascending);
  // Monic polynomial with the given roots.
  static UniPoly from_roots(const std::vector<double>& roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<xreal>& coeffs() const { return coeffs_; }
  std::vector<double> coeffs_double() const;
  xreal leading() const { return coeffs_.back(); }

  UniPoly monic() const;
  UniPoly derivative() const;
  xreal operator()(const xreal& x) const;
  double operator()(double x) const;

  // Descending powers, fixed decimals: "x^6 + 13.4913 x^5 - ... + 0.0017".
  std::string format(int decimals = 4) const;

 private:
  std::vector<xreal> coeffs_;
};

struct RootCount {
  int descartes_max = 0;
  int sturm_positive = 0;
  int sturm_negative = 0;
  // descartes_max - sturm_positive is a nonnegative even number.
  bool agrees = false;
  bool squarefree = true;
  int numeric_gcd_degree = 0;
};

/// Sign changes of the coefficient sequence, zeros skipped.
int descartes(const UniPoly& p);

/// Distinct roots in (a, b] counted by Sturm sign variations. Infinite
/// endpoints use leading-coefficient signs. Chains are evaluated at 128 bits
/// and rebuilt at 256 bits when a sign is within 1e-20 of the leading-term
/// scale; a PrecisionError escapes only if both fail.
int sturm_count(const UniPoly& p, double a, double b);
int sturm_positive(const UniPoly& p);
int sturm_negative(const UniPoly& p);

/// Degree of the numerical gcd of p and p', from the singular values of their
/// Sylvester matrix (threshold 1e-10 relative to the largest).
int numeric_gcd_degree(const UniPoly& p, double threshold = 1e-10);

RootCount count_roots(const UniPoly& p);

/// Monic polynomial whose roots are the squares of the chosen coordinate over
/// one representative of each (Vd, Vq) / (Vd, -Vq) pair. The nonconstant
/// solutions must pair up under check_symmetry. Throws StructuralError when the
/// Vieta coefficients keep an imaginary part above 1e-8 and
/// NonGenericCoordinate when two squared values agree within 1e-10.
UniPoly build_eliminant(const std::vector<CVec>& nonconstant, std::size_t coord_index);

/// Tries V_q of the last non-slack bus first, then the others.
UniPoly build_eliminant_any(const std::vector<CVec>& nonconstant, std::size_t* used_index = nullptr);

struct EliminantCount {
  UniPoly poly;
  std::size_t coordinate = 0;
  RootCount roots;
  int trivial = 0;
  int via_eliminant = 0;  // trivial + 2 * sturm_positive
  int direct = 0;         // split_real count
  int roots_above_one = 0;
};

/// Real-solution count of a zero-injection PV network from the eliminant.
/// Throws StructuralError if it disagrees with the direct classification.
EliminantCount count_real_via_eliminant(const PowerSystem& ps, const SolutionSet& ss,
                                        double real_tol = kDefaultRealTol);

}  // namespace pfreal
