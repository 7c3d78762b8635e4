//===-- Term.h - Linear integer terms with opaque residue -------*- C++ -*-===//
//
// A Term is a linear combination of integer symbols plus a constant. Products
// of two non-constant terms, and divisions/remainders by non-constant terms,
// are wrapped as opaque symbols whose definition travels with the term.
//
//===----------------------------------------------------------------------===//

#ifndef SYMDEFFIX_TERM_H
#define SYMDEFFIX_TERM_H

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace symdeffix {

using Model = std::map<std::string, int64_t>;

struct ArithmeticOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

int64_t checkedAdd(int64_t a, int64_t b);
int64_t checkedMul(int64_t a, int64_t b);
int64_t floorDiv(int64_t a, int64_t b);
int64_t ceilDiv(int64_t a, int64_t b);

struct OpaqueDef;

class Term {
public:
  Term() = default;

  static Term constant(int64_t value);
  static Term symbol(const std::string &name);

  bool isConstant() const { return coeffs_.empty(); }
  int64_t constantPart() const { return const_; }
  /// Symbols the linear layer sees; opaque symbols appear under their
  /// canonical s-expression name.
  const std::map<std::string, int64_t> &coefficients() const {
    return coeffs_;
  }
  int64_t coefficientOf(const std::string &sym) const;
  const std::map<std::string, std::shared_ptr<const OpaqueDef>> &
  opaqueDefs() const {
    return opaque_;
  }
  bool hasOpaque() const { return !opaque_.empty(); }
  bool isOpaqueSymbol(const std::string &sym) const {
    return opaque_.count(sym) != 0;
  }

  Term operator+(const Term &o) const;
  Term operator-(const Term &o) const;
  Term operator-() const;
  Term scaled(int64_t k) const;
  /// Divides every coefficient by `divisor` (which must divide them all) and
  /// replaces the constant part.
  Term reduced(int64_t divisor, int64_t newConstant) const;

  /// C semantics when both operands are constant; division by a constant
  /// zero and all non-linear cases produce an opaque symbol.
  static Term mul(const Term &a, const Term &b);
  static Term div(const Term &a, const Term &b);
  static Term mod(const Term &a, const Term &b);

  Term substitute(const std::string &sym, const Term &by) const;
  Term substitute(const std::map<std::string, Term> &subst) const;

  /// Plain (non-opaque) symbols, including those nested in opaque terms.
  std::set<std::string> freeSymbols() const;

  /// Missing symbols evaluate to 0. Throws ArithmeticOverflow and
  /// std::domain_error (opaque division by zero).
  int64_t evaluate(const Model &m) const;

  std::string str() const;

  bool operator==(const Term &o) const {
    return const_ == o.const_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const Term &o) const { return !(*this == o); }
  bool operator<(const Term &o) const;

private:
  void addScaled(const Term &o, int64_t k);
  static Term makeOpaque(char op, const Term &a, const Term &b);

  std::map<std::string, int64_t> coeffs_;
  int64_t const_ = 0;
  std::map<std::string, std::shared_ptr<const OpaqueDef>> opaque_;
};

struct OpaqueDef {
  char op = '*'; // '*', '/', '%'
  Term lhs;
  Term rhs;
};

int64_t evaluateOpaque(const OpaqueDef &def, const Model &m);

} // namespace symdeffix

#endif
