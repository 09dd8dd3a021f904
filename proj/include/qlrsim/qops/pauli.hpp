#pragma once

#include <Eigen/Dense>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlrsim::qops {

using cplx = std::complex<double>;

/// Coefficients below this magnitude are dropped by PauliSum::simplify().
inline constexpr double kPruneThreshold = 1e-14;
/// Largest register handled by the bitmask representation.
inline constexpr int kMaxQubits = 62;

class OperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pauli string as bit masks. Qubit q carries X if bit q of `x` is set and Z
/// if bit q of `z` is set; both set means Y. As an operator the string is
///   P = i^{popcount(x & z)} X^x Z^z
/// so that P|b> = i^{|x&z|} (-1)^{|b&z|} |b ^ x>.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString single(int qubit, char letter);
  /// Parses "IXYZ..." with qubit 0 leftmost.
  static PauliString parse(std::string_view text);
  std::string to_string(int n_qubits) const;
  int n_y() const { return __builtin_popcountll(x & z); }
  bool is_identity() const { return x == 0 && z == 0; }

  auto operator<=>(const PauliString&) const = default;
};

/// a * b = i^phase * result.
struct PauliProduct {
  int phase;  // power of i, 0..3
  PauliString string;
};
PauliProduct multiply(PauliString a, PauliString b);

/// Weighted sum of Pauli strings on a fixed register. Terms are kept in a
/// canonical (ordered) map so iteration order is deterministic.
class PauliSum {
 public:
  using TermMap = std::map<PauliString, cplx>;

  explicit PauliSum(int n_qubits = 0);
  static PauliSum identity(int n_qubits, cplx coeff = 1.0);
  static PauliSum from_string(std::string_view pauli, cplx coeff = 1.0);

  int n_qubits() const { return n_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  cplx coefficient(const PauliString& p) const;

  void add_term(const PauliString& p, cplx coeff);
  /// Drops terms with |c| < threshold.
  PauliSum& simplify(double threshold = kPruneThreshold);

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx s);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  PauliSum adjoint() const;
  /// Pauli strings are Hermitian, so Hermiticity means real coefficients.
  bool is_hermitian(double tol = 1e-12) const;
  bool is_anti_hermitian(double tol = 1e-12) const;
  double one_norm() const;
  /// Largest |coefficient| of a - b.
  friend double max_difference(const PauliSum& a, const PauliSum& b);

  std::string to_string() const;
  /// Dense 2^n matrix; basis index bit q is qubit q. For tests (n <= 12).
  Eigen::MatrixXcd to_dense() const;

 private:
  int n_ = 0;
  TermMap terms_;
};

PauliSum commutator(const PauliSum& a, const PauliSum& b);

}  // namespace qlrsim::qops
