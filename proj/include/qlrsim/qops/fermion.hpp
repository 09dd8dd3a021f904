#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlrsim/qops/pauli.hpp"

namespace qlrsim::qops {

struct LadderOp {
  int index;
  bool creation;
  auto operator<=>(const LadderOp&) const = default;
};

/// Product of ladder operators, leftmost acts last.
struct FermionTerm {
  std::vector<LadderOp> ops;
  cplx coeff{1.0, 0.0};
};

/// Sum of ladder-operator products over spin orbitals (interleaved ordering).
class FermionOperator {
 public:
  FermionOperator() = default;
  static FermionOperator identity(cplx coeff = 1.0);
  static FermionOperator product(std::vector<LadderOp> ops, cplx coeff = 1.0);
  /// a+_{c0} a+_{c1} ... a_{a0} a_{a1} ...
  static FermionOperator excitation(const std::vector<int>& create, const std::vector<int>& annihilate,
                                    cplx coeff = 1.0);

  const std::vector<FermionTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int max_index() const;

  FermionOperator& operator+=(const FermionOperator& other);
  FermionOperator& operator-=(const FermionOperator& other);
  FermionOperator& operator*=(cplx s);
  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) { return a += b; }
  friend FermionOperator operator-(FermionOperator a, const FermionOperator& b) { return a -= b; }
  friend FermionOperator operator*(FermionOperator a, cplx s) { return a *= s; }
  friend FermionOperator operator*(cplx s, FermionOperator a) { return a *= s; }
  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b);

  FermionOperator adjoint() const;
  /// Canonical form: creators left of annihilators, each group in descending
  /// index order, like terms merged and zeros dropped.
  FermionOperator normal_ordered() const;

  /// Action on an occupation bitstring: returns the sign and the new string,
  /// or nothing when the term annihilates it. Single-term operators only.
  static std::optional<std::pair<double, std::uint64_t>> apply_term(const FermionTerm& term, std::uint64_t det);

  std::string to_string() const;

 private:
  std::vector<FermionTerm> terms_;
};

/// Largest |coefficient| difference between the normal-ordered forms.
double max_difference(const FermionOperator& a, const FermionOperator& b);

}  // namespace qlrsim::qops
