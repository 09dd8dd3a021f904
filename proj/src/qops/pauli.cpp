#include "qlrsim/qops/pauli.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qlrsim::qops {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_register(int n) {
  if (n < 0 || n > kMaxQubits) throw OperatorError("register size " + std::to_string(n) + " unsupported");
}

}  // namespace

PauliString PauliString::single(int qubit, char letter) {
  if (qubit < 0 || qubit >= kMaxQubits) throw OperatorError("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (letter) {
    case 'I': return {};
    case 'X': return {bit, 0};
    case 'Y': return {bit, bit};
    case 'Z': return {0, bit};
    default: throw OperatorError(std::string("unknown Pauli letter '") + letter + "'");
  }
}

PauliString PauliString::parse(std::string_view text) {
  if (static_cast<int>(text.size()) > kMaxQubits) throw OperatorError("Pauli string too long");
  PauliString p;
  for (std::size_t q = 0; q < text.size(); ++q) {
    const PauliString s = single(static_cast<int>(q), text[q]);
    p.x |= s.x;
    p.z |= s.z;
  }
  return p;
}

std::string PauliString::to_string(int n_qubits) const {
  std::string out(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) {
    const bool bx = (x >> q) & 1, bz = (z >> q) & 1;
    out[q] = bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  return out;
}

PauliProduct multiply(PauliString a, PauliString b) {
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
  const PauliString r{a.x ^ b.x, a.z ^ b.z};
  int phase = a.n_y() + b.n_y() + 2 * __builtin_popcountll(a.z & b.x) - r.n_y();
  phase = ((phase % 4) + 4) % 4;
  return {phase, r};
}

PauliSum::PauliSum(int n_qubits) : n_(n_qubits) { check_register(n_qubits); }

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  PauliSum s(n_qubits);
  s.add_term({}, coeff);
  return s;
}

PauliSum PauliSum::from_string(std::string_view pauli, cplx coeff) {
  PauliSum s(static_cast<int>(pauli.size()));
  s.add_term(PauliString::parse(pauli), coeff);
  return s;
}

cplx PauliSum::coefficient(const PauliString& p) const {
  const auto it = terms_.find(p);
  return it == terms_.end() ? cplx{} : it->second;
}

void PauliSum::add_term(const PauliString& p, cplx coeff) {
  if (n_ < 64 && ((p.x | p.z) >> n_) != 0) throw OperatorError("Pauli string exceeds register");
  terms_[p] += coeff;
}

PauliSum& PauliSum::simplify(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < threshold) it = terms_.erase(it);
    else ++it;
  }
  return *this;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_ != n_) throw OperatorError("register mismatch in PauliSum addition");
  for (const auto& [p, c] : other.terms_) terms_[p] += c;
  return simplify();
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  if (other.n_ != n_) throw OperatorError("register mismatch in PauliSum subtraction");
  for (const auto& [p, c] : other.terms_) terms_[p] -= c;
  return simplify();
}

PauliSum& PauliSum::operator*=(cplx s) {
  for (auto& [p, c] : terms_) c *= s;
  return simplify();
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_) throw OperatorError("register mismatch in PauliSum product");
  PauliSum out(a.n_);
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) {
      const auto prod = multiply(pa, pb);
      out.terms_[prod.string] += kIPow[prod.phase] * ca * cb;
    }
  return out.simplify();
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_);
  for (const auto& [p, c] : terms_) out.terms_[p] = std::conj(c);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [p, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

bool PauliSum::is_anti_hermitian(double tol) const {
  for (const auto& [p, c] : terms_)
    if (std::abs(c.real()) > tol) return false;
  return true;
}

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto& [p, c] : terms_) s += std::abs(c);
  return s;
}

double max_difference(const PauliSum& a, const PauliSum& b) {
  double d = 0.0;
  for (const auto& [p, c] : a.terms_) d = std::max(d, std::abs(c - b.coefficient(p)));
  for (const auto& [p, c] : b.terms_)
    if (!a.terms_.count(p)) d = std::max(d, std::abs(c));
  return d;
}

std::string PauliSum::to_string() const {
  std::ostringstream out;
  out << std::setprecision(12);
  bool first = true;
  for (const auto& [p, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i) " << p.to_string(n_);
  }
  if (first) out << "0";
  return out.str();
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (n_ > 12) throw OperatorError("dense matrix requested for more than 12 qubits");
  const std::size_t dim = std::size_t{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, c] : terms_) {
    const cplx phase = kIPow[p.n_y() % 4] * c;
    for (std::size_t b = 0; b < dim; ++b) {
      const double sign = (__builtin_popcountll(b & p.z) & 1) ? -1.0 : 1.0;
      m(b ^ p.x, b) += sign * phase;
    }
  }
  return m;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

}  // namespace qlrsim::qops
