#include "qlrsim/qops/fermion.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qlrsim::qops {

FermionOperator FermionOperator::identity(cplx coeff) { return product({}, coeff); }

FermionOperator FermionOperator::product(std::vector<LadderOp> ops, cplx coeff) {
  for (const auto& op : ops)
    if (op.index < 0) throw OperatorError("negative spin-orbital index");
  FermionOperator f;
  f.terms_.push_back({std::move(ops), coeff});
  return f;
}

FermionOperator FermionOperator::excitation(const std::vector<int>& create, const std::vector<int>& annihilate,
                                            cplx coeff) {
  std::vector<LadderOp> ops;
  for (int p : create) ops.push_back({p, true});
  for (int p : annihilate) ops.push_back({p, false});
  return product(std::move(ops), coeff);
}

int FermionOperator::max_index() const {
  int m = -1;
  for (const auto& t : terms_)
    for (const auto& op : t.ops) m = std::max(m, op.index);
  return m;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FermionOperator& FermionOperator::operator-=(const FermionOperator& other) {
  for (auto t : other.terms_) {
    t.coeff = -t.coeff;
    terms_.push_back(std::move(t));
  }
  return *this;
}

FermionOperator& FermionOperator::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) {
  FermionOperator out;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      FermionTerm t{ta.ops, ta.coeff * tb.coeff};
      t.ops.insert(t.ops.end(), tb.ops.begin(), tb.ops.end());
      out.terms_.push_back(std::move(t));
    }
  return out;
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator out;
  for (const auto& t : terms_) {
    FermionTerm r{{}, std::conj(t.coeff)};
    for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) r.ops.push_back({it->index, !it->creation});
    out.terms_.push_back(std::move(r));
  }
  return out;
}

namespace {

// Bubble sort with anticommutation; contractions spawn extra terms.
void normal_order_term(FermionTerm term, std::map<std::vector<LadderOp>, cplx>& acc) {
  std::vector<FermionTerm> work{std::move(term)};
  while (!work.empty()) {
    FermionTerm t = std::move(work.back());
    work.pop_back();
    bool zero = false;
    auto& ops = t.ops;
    for (std::size_t i = 1; i < ops.size() && !zero; ++i) {
      for (std::size_t j = i; j > 0; --j) {
        LadderOp& left = ops[j - 1];
        LadderOp& right = ops[j];
        const bool swap = (!left.creation && right.creation) ||
                          (left.creation == right.creation && left.index < right.index);
        if (!swap) {
          if (left.creation == right.creation && left.index == right.index) zero = true;
          break;
        }
        if (!left.creation && right.creation && left.index == right.index) {
          // a_p a+_p = 1 - a+_p a_p
          FermionTerm contracted{{}, t.coeff};
          contracted.ops.insert(contracted.ops.end(), ops.begin(), ops.begin() + (j - 1));
          contracted.ops.insert(contracted.ops.end(), ops.begin() + (j + 1), ops.end());
          work.push_back(std::move(contracted));
        }
        std::swap(left, right);
        t.coeff = -t.coeff;
      }
    }
    if (!zero) acc[ops] += t.coeff;
  }
}

}  // namespace

FermionOperator FermionOperator::normal_ordered() const {
  std::map<std::vector<LadderOp>, cplx> acc;
  for (const auto& t : terms_) normal_order_term(t, acc);
  FermionOperator out;
  for (const auto& [ops, c] : acc)
    if (std::abs(c) >= kPruneThreshold) out.terms_.push_back({ops, c});
  return out;
}

std::optional<std::pair<double, std::uint64_t>> FermionOperator::apply_term(const FermionTerm& term,
                                                                            std::uint64_t det) {
  double sign = 1.0;
  for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
    const std::uint64_t bit = std::uint64_t{1} << it->index;
    const bool occupied = det & bit;
    if (occupied == it->creation) return std::nullopt;
    // Jordan-Wigner parity of the orbitals below the index.
    if (__builtin_popcountll(det & (bit - 1)) & 1) sign = -sign;
    det ^= bit;
  }
  return std::make_pair(sign, det);
}

std::string FermionOperator::to_string() const {
  std::ostringstream out;
  out.precision(12);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "-" : "+") << std::abs(t.coeff.imag()) << "i)";
    for (const auto& op : t.ops) out << ' ' << op.index << (op.creation ? "^" : "");
  }
  if (first) out << "0";
  return out.str();
}

double max_difference(const FermionOperator& a, const FermionOperator& b) {
  const auto d = (a - b).normal_ordered();
  double m = 0.0;
  for (const auto& t : d.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

}  // namespace qlrsim::qops
