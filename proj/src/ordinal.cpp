#include "ordlab/ordinal.hpp"

#include <sstream>

#include "ordlab/error.hpp"

namespace ordlab {

Ordinal::Ordinal(std::uint64_t n) {
  if (n != 0) terms_.push_back(OrdTerm{Ordinal(), Nat(n)});
}

Ordinal::Ordinal(const Nat& n) {
  if (n != 0) terms_.push_back(OrdTerm{Ordinal(), n});
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero());
}

Ordinal Ordinal::from_terms(std::vector<OrdTerm> terms) {
  for (size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff < 1) fail(ErrKind::BadSpec, "CNF coefficient must be >= 1");
    if (i + 1 < terms.size() && !(terms[i + 1].exp < terms[i].exp))
      fail(ErrKind::BadSpec, "CNF exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

Nat Ordinal::finite_value() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) fail(ErrKind::Undefined, "finite_value of an infinite ordinal");
  return terms_[0].coeff;
}

PointKind Ordinal::kind() const {
  if (terms_.empty()) return PointKind::Zero;
  return terms_.back().exp.is_zero() ? PointKind::Successor : PointKind::Limit;
}

Ordinal Ordinal::tail() const {
  Ordinal t;
  t.terms_.assign(terms_.begin() + 1, terms_.end());
  return t;
}

int compare(const Ordinal& a, const Ordinal& b) {
  size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.terms_[i].exp, b.terms_[i].exp);
    if (c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff)
      return a.terms_[i].coeff < b.terms_[i].coeff ? -1 : 1;
  }
  if (a.terms_.size() == b.terms_.size()) return 0;
  return a.terms_.size() < b.terms_.size() ? -1 : 1;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& e = b.terms_.front().exp;
  Ordinal out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  size_t i = 0;
  while (i < a.terms_.size() && e < a.terms_[i].exp) out.terms_.push_back(a.terms_[i++]);
  if (i < a.terms_.size() && a.terms_[i].exp == e) {
    out.terms_.push_back(OrdTerm{e, a.terms_[i].coeff + b.terms_.front().coeff});
  } else {
    out.terms_.push_back(b.terms_.front());
  }
  out.terms_.insert(out.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
  return out;
}

Ordinal left_sub(const Ordinal& a, const Ordinal& b) {
  if (a > b) fail(ErrKind::Undefined, "left_sub requires a <= b");
  // First index where the term lists differ decides the shape of c.
  size_t i = 0;
  while (i < a.terms_.size() && i < b.terms_.size()) {
    const auto& ta = a.terms_[i];
    const auto& tb = b.terms_[i];
    if (ta.exp == tb.exp && ta.coeff == tb.coeff) { ++i; continue; }
    break;
  }
  Ordinal c;
  if (i == a.terms_.size()) {
    // a is a prefix of b; the remainder of b is already the difference.
    c.terms_.assign(b.terms_.begin() + i, b.terms_.end());
    return c;
  }
  const auto& ta = a.terms_[i];
  const auto& tb = b.terms_[i];
  if (ta.exp < tb.exp) {
    c.terms_.assign(b.terms_.begin() + i, b.terms_.end());
    return c;
  }
  // Equal exponents, b's coefficient strictly larger (a <= b rules out the rest).
  c.terms_.push_back(OrdTerm{tb.exp, tb.coeff - ta.coeff});
  c.terms_.insert(c.terms_.end(), b.terms_.begin() + i + 1, b.terms_.end());
  return c;
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal out;
  const Ordinal& alead = a.terms_.front().exp;
  for (const auto& tb : b.terms_) {
    if (!tb.exp.is_zero()) {
      out.terms_.push_back(OrdTerm{add(alead, tb.exp), tb.coeff});
    } else {
      // Finite factor: scales the leading coefficient, the tail rides along once.
      out.terms_.push_back(OrdTerm{alead, a.terms_.front().coeff * tb.coeff});
      out.terms_.insert(out.terms_.end(), a.terms_.begin() + 1, a.terms_.end());
    }
  }
  return out;
}

Ordinal omega_pow(const Ordinal& a) {
  return Ordinal::from_terms({OrdTerm{a, Nat(1)}});
}

Ordinal omega() { return omega_pow(Ordinal(1)); }

Ordinal pred(const Ordinal& a) {
  if (!a.is_successor()) fail(ErrKind::Undefined, "pred of a non-successor");
  auto ts = a.terms();
  if (ts.back().coeff > 1) {
    ts.back().coeff -= 1;
  } else {
    ts.pop_back();
  }
  return Ordinal::from_terms(std::move(ts));
}

bool is_indecomposable(const Ordinal& a) {
  if (a.is_zero()) fail(ErrKind::Undefined, "is_indecomposable requires a > 0");
  return a.terms().size() == 1 && a.terms()[0].coeff == 1;
}

Ordinal fundamental_seq(const Ordinal& a, std::uint64_t n) {
  if (!a.is_limit()) fail(ErrKind::NotLimit, "fundamental_seq requires a limit ordinal");
  auto ts = a.terms();
  OrdTerm last = ts.back();
  ts.pop_back();
  if (last.coeff > 1) {
    ts.push_back(OrdTerm{last.exp, last.coeff - 1});
  }
  Ordinal prefix = Ordinal::from_terms(std::move(ts));
  const Ordinal& beta = last.exp;  // >= 1 since a is a limit
  Ordinal step;
  if (beta.is_successor()) {
    step = mul(omega_pow(pred(beta)), Ordinal(n + 1));
  } else {
    step = omega_pow(fundamental_seq(beta, n));
  }
  return add(prefix, step);
}

DivLeft div_left(const Ordinal& r, const Ordinal& d) {
  if (d.is_zero()) fail(ErrKind::Undefined, "division by zero ordinal");
  DivLeft out;
  if (r.is_zero()) return out;
  const Ordinal& g = d.lead().exp;
  const Nat& dc = d.lead().coeff;
  Ordinal rest = r;
  std::vector<OrdTerm> qterms;
  while (!rest.is_zero()) {
    const Ordinal& h = rest.lead().exp;
    if (h < g) break;
    if (h > g) {
      Ordinal e = left_sub(g, h);
      qterms.push_back(OrdTerm{e, rest.lead().coeff});
      rest = rest.tail();
      continue;
    }
    // h == g: the quotient's final, finite part.
    Nat k = rest.lead().coeff / dc;
    if (k > 0 && k * dc == rest.lead().coeff && rest.tail() < d.tail()) {
      // d*k = w^g*(dc*k) + tail(d); that overshoots rest, back off one.
      k -= 1;
    }
    if (k > 0) qterms.push_back(OrdTerm{Ordinal(), k});
    break;
  }
  out.quot = Ordinal::from_terms(std::move(qterms));
  out.rem = left_sub(mul(d, out.quot), r);
  if (!(out.rem < d)) fail(ErrKind::Internal, "div_left remainder not reduced");
  return out;
}

Ordinal ceil_div_left(const Ordinal& r, const Ordinal& d) {
  DivLeft dl = div_left(r, d);
  if (dl.rem.is_zero()) return dl.quot;
  return add(dl.quot, Ordinal(1));
}

AffineSolution solve_affine(const Ordinal& delta, const Ordinal& gamma, const Ordinal& v) {
  AffineSolution s;
  if (!(delta <= v)) return s;
  Ordinal r = left_sub(delta, v);
  DivLeft dl = div_left(r, gamma);
  if (!dl.rem.is_zero() || dl.quot.is_zero()) return s;
  s.ok = true;
  s.xi = dl.quot;
  return s;
}

namespace {

void print_term(std::ostream& os, const OrdTerm& t) {
  if (t.exp.is_zero()) {
    os << nat_str(t.coeff);
    return;
  }
  os << "w";
  if (!(t.exp == Ordinal(1))) {
    // Bare exponents only for numerals and w itself; everything else in parens.
    bool paren = !(t.exp.is_finite() || t.exp == omega_pow(Ordinal(1)));
    os << "^";
    if (paren) os << "(";
    os << t.exp.str();
    if (paren) os << ")";
  }
  if (t.coeff != 1) os << "*" << nat_str(t.coeff);
}

}  // namespace

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << "+";
    print_term(os, terms_[i]);
  }
  return os.str();
}

std::string to_string(const Ordinal& a) { return a.str(); }

}  // namespace ordlab
