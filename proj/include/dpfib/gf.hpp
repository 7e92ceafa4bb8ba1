#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dpfib {

// Element of a finite field, encoded as an index in [0, p^k).
// The base-p digits of the index are the power-basis coordinates
// (digit 0 = constant coefficient).
using felem = std::uint16_t;

// Arithmetic tables for GF(p^k), p in {2,3}.  Supported extensions:
// k <= 10 for p = 2 and k <= 6 for p = 3, so full-field scans stay
// within desk-scale budgets.  The modulus for each (p,k) is the
// lexicographically smallest primitive polynomial; it is revalidated
// (irreducibility by factor search, primitivity of x) on construction.
// Instances are immutable after construction and safe to share.
class GF {
public:
  static const GF& get(int p, int k);
  // Accepts "GF(2)", "GF(2^3)", "GF(3^2)".
  static const GF& parse(std::string_view spec);

  int p() const { return p_; }
  int k() const { return k_; }
  int size() const { return q_; }
  std::string name() const;

  felem zero() const { return 0; }
  felem one() const { return 1; }

  felem add(felem a, felem b) const {
    return p_ == 2 ? static_cast<felem>(a ^ b) : add_tab_[a * q_ + b];
  }
  felem neg(felem a) const { return p_ == 2 ? a : neg_tab_[a]; }
  felem sub(felem a, felem b) const { return add(a, neg(b)); }
  felem mul(felem a, felem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_tab_[log_tab_[a] + log_tab_[b]];
  }
  felem inv(felem a) const;
  felem div(felem a, felem b) const { return mul(a, inv(b)); }
  felem pow(felem a, long e) const;
  felem from_int(long v) const;
  // x -> x^p; an automorphism, bijective.
  felem frobenius(felem a) const { return pow(a, p_); }
  // Inverse of Frobenius (p-th roots always exist).
  felem pth_root(felem a) const;

  felem generator() const { return gen_; }
  // Discrete log base the stored generator; a must be nonzero.
  int log(felem a) const;

  std::vector<int> coords(felem a) const;
  felem from_coords(std::span<const int> c) const;

  // "0", "1", "2" for prime-subfield elements, "g^5" otherwise.
  std::string format(felem a) const;
  felem parse_elem(std::string_view s) const;

  const std::vector<int>& modulus() const { return modulus_; }

  // Coordinatewise map realizing GF(p^k) as a subfield of big
  // (requires same p and k | K).  emb[a] is the image of a.
  const std::vector<felem>& embedding_into(const GF& big) const;

  GF(const GF&) = delete;
  GF& operator=(const GF&) = delete;

private:
  GF(int p, int k);

  felem raw_mul(felem a, felem b) const;  // digit convolution, used to bootstrap tables

  int p_, k_, q_;
  std::vector<int> modulus_;  // little-endian, monic of degree k
  felem gen_ = 0;
  std::vector<felem> exp_tab_;  // size 2(q-1), doubled to skip a mod
  std::vector<int> log_tab_;    // size q, log_tab_[0] unused
  std::vector<felem> add_tab_;  // p = 3 only
  std::vector<felem> neg_tab_;  // p = 3 only
  mutable std::vector<std::pair<const GF*, std::vector<felem>>> embeddings_;
};

// Thrown when a scan would exceed its point-evaluation budget.
struct budget_exceeded : std::runtime_error {
  long long required;
  budget_exceeded(long long req, long long budget)
      : std::runtime_error("scan requires " + std::to_string(req) +
                           " point evaluations, budget is " + std::to_string(budget)),
        required(req) {}
};

inline constexpr long long kDefaultScanBudget = 100'000'000;

// Visits every vector in F_q^dim exactly once, in lexicographic order
// (coordinate 0 most significant, elements ordered by index).
// Refuses up front when q^dim exceeds the budget.
template <class Fn>
void enumerate_points(const GF& F, int dim, long long budget, Fn&& fn) {
  long long total = 1;
  for (int i = 0; i < dim; ++i) {
    total *= F.size();
    if (total > budget) {
      long long req = 1;
      for (int j = 0; j < dim; ++j) req *= F.size();
      throw budget_exceeded(req, budget);
    }
  }
  std::vector<felem> pt(dim, 0);
  for (long long n = 0; n < total; ++n) {
    fn(std::span<const felem>(pt));
    for (int i = dim - 1; i >= 0; --i) {
      if (++pt[i] < F.size()) break;
      pt[i] = 0;
    }
  }
}

long long point_count(const GF& F, int dim, long long budget);  // q^dim or throws

// Worker count for data-parallel scans: DPFIB_THREADS when set,
// otherwise the available hardware parallelism.
int scan_thread_count();

// Deterministic splitmix64 generator; identical streams on every
// platform, unlike the standard distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  felem uniform(const GF& F) { return static_cast<felem>(below(F.size())); }
  felem nonzero(const GF& F) { return static_cast<felem>(1 + below(F.size() - 1)); }
  Rng fork();  // independent child stream

private:
  std::uint64_t state_;
};

// Exact rational with normalized sign and gcd-reduced terms.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1);

  friend bool operator==(const Rational&, const Rational&) = default;
  bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
  bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
  std::string str() const;
};

}  // namespace dpfib
