#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpfib/gf.hpp"

namespace dpfib {

// Exponent vector over a fixed ring; compared lexicographically.
struct Monomial {
  std::vector<std::uint8_t> exps;

  explicit Monomial(int nvars = 0) : exps(nvars, 0) {}
  static Monomial unit(int nvars, int var, int e = 1) {
    Monomial m(nvars);
    m.exps[var] = static_cast<std::uint8_t>(e);
    return m;
  }
  int degree() const {
    int d = 0;
    for (auto e : exps) d += e;
    return d;
  }
  Monomial operator*(const Monomial& o) const;
  auto operator<=>(const Monomial&) const = default;
};

// Variable context shared by polynomials.
class Ring {
public:
  static std::shared_ptr<const Ring> make(std::vector<std::string> names);
  int nvars() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  int index_of(std::string_view name) const;  // -1 if absent

private:
  explicit Ring(std::vector<std::string> n) : names_(std::move(n)) {}
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

// Sparse multivariate polynomial with coefficients in GF(p^k).
// Zero coefficients are never stored.
class Poly {
public:
  Poly() = default;
  Poly(RingPtr ring, const GF& F) : ring_(std::move(ring)), F_(&F) {}
  static Poly constant(RingPtr ring, const GF& F, felem c);
  static Poly variable(RingPtr ring, const GF& F, int var);

  const GF& field() const { return *F_; }
  const RingPtr& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::map<Monomial, felem>& terms() const { return terms_; }

  felem coeff(const Monomial& m) const;
  void add_term(const Monomial& m, felem c);
  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(int var) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(felem c) const;
  Poly pow(int e) const;
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  felem eval(std::span<const felem> point) const;
  Poly derivative(int var) const;
  // Substitute variable var by the value c (ring unchanged).
  Poly at(int var, felem c) const;
  // Substitute variable var by a polynomial in the same ring.  When
  // degree_cap >= 0, monomials of total degree >= degree_cap are dropped
  // as they appear (used for jet computations).
  Poly substituted(int var, const Poly& repl, int degree_cap = -1) const;
  // Shift of origin: every variable v becomes v + point[v].
  Poly translated(std::span<const felem> point, int degree_cap = -1) const;
  // Forget a set of variables (their exponents must be zero in every
  // term); remaining variables are renumbered in order.
  Poly without_vars(const std::vector<int>& vars, RingPtr target) const;
  // Coefficient-wise embedding into a larger field (same p, k | K).
  Poly mapped_into(const GF& big) const;

  // Removes every term whose exponents are all divisible by p; the
  // removed part is h^p for some h because Frobenius is onto.
  Poly stripped_pth_powers() const;

  std::string str() const;
  static Poly parse(RingPtr ring, const GF& F, std::string_view text);

private:
  RingPtr ring_;
  const GF* F_ = nullptr;
  std::map<Monomial, felem> terms_;
};

// Power lookup: tab[a * stride + e] = a^e for all field elements and
// exponents up to the stride - 1.  Shared by scan loops.
struct PowTable {
  int stride = 0;
  std::vector<felem> tab;
  PowTable(const GF& F, int max_exp);
  felem pow(felem a, int e) const { return tab[a * stride + e]; }
};

// Flattened form for full-field scans: evaluation without map walks.
class CompiledPoly {
public:
  explicit CompiledPoly(const Poly& f);
  felem eval(const GF& F, std::span<const felem> pt) const;
  felem eval(const GF& F, const PowTable& pw, std::span<const felem> pt) const;
  int max_exponent() const { return max_exp_; }

private:
  struct Factor {
    std::uint16_t var;
    std::uint16_t exp;
  };
  struct Term {
    felem coeff;
    std::uint32_t begin, end;  // factor range
  };
  std::vector<Term> terms_;
  std::vector<Factor> factors_;
  int max_exp_ = 0;
};

}  // namespace dpfib
