#include "dpfib/gf.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

namespace dpfib {

namespace {

// Lexicographically smallest primitive polynomial per (p,k),
// little-endian with leading 1.  Revalidated in the constructor.
const std::map<std::pair<int, int>, std::vector<int>> kModuli = {
    {{2, 1}, {0, 1}},
    {{2, 2}, {1, 1, 1}},
    {{2, 3}, {1, 1, 0, 1}},
    {{2, 4}, {1, 1, 0, 0, 1}},
    {{2, 5}, {1, 0, 1, 0, 0, 1}},
    {{2, 6}, {1, 1, 0, 0, 0, 0, 1}},
    {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
    {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
    {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
    {{2, 10}, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1}},
    {{3, 1}, {0, 1}},
    {{3, 2}, {2, 1, 1}},
    {{3, 3}, {1, 2, 0, 1}},
    {{3, 4}, {2, 1, 0, 0, 1}},
    {{3, 5}, {1, 2, 0, 0, 0, 1}},
    {{3, 6}, {2, 1, 0, 0, 0, 0, 1}},
};

std::vector<int> digits_of(felem a, int p, int k) {
  std::vector<int> d(k);
  for (int i = 0; i < k; ++i) {
    d[i] = a % p;
    a = static_cast<felem>(a / p);
  }
  return d;
}

felem from_digits(std::span<const int> d, int p) {
  long v = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * p + d[i];
  return static_cast<felem>(v);
}

std::vector<int> prime_factors(long n) {
  std::vector<int> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<int>(d));
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(static_cast<int>(n));
  return out;
}

}  // namespace

felem GF::raw_mul(felem a, felem b) const {
  auto da = digits_of(a, p_, k_);
  auto db = digits_of(b, p_, k_);
  std::vector<int> prod(2 * k_ - 1, 0);
  for (int i = 0; i < k_; ++i)
    if (da[i])
      for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  // reduce by the monic modulus
  for (int d = 2 * k_ - 2; d >= k_; --d) {
    int top = prod[d];
    if (top) {
      for (int i = 0; i <= k_; ++i) {
        int idx = d - k_ + i;
        prod[idx] = ((prod[idx] - top * modulus_[i]) % p_ + p_) % p_;
      }
    }
  }
  prod.resize(k_);
  return from_digits(prod, p_);
}

GF::GF(int p, int k) : p_(p), k_(k) {
  auto it = kModuli.find({p, k});
  if (it == kModuli.end())
    throw std::invalid_argument("unsupported field GF(" + std::to_string(p) + "^" +
                                std::to_string(k) + ")");
  modulus_ = it->second;
  q_ = 1;
  for (int i = 0; i < k; ++i) q_ *= p;

  if (p_ == 3) {
    add_tab_.resize(static_cast<size_t>(q_) * q_);
    neg_tab_.resize(q_);
    for (felem a = 0; a < q_; ++a) {
      auto da = digits_of(a, p_, k_);
      std::vector<int> dn(k_);
      for (int i = 0; i < k_; ++i) dn[i] = (p_ - da[i]) % p_;
      neg_tab_[a] = from_digits(dn, p_);
      for (felem b = 0; b < q_; ++b) {
        auto db = digits_of(b, p_, k_);
        std::vector<int> ds(k_);
        for (int i = 0; i < k_; ++i) ds[i] = (da[i] + db[i]) % p_;
        add_tab_[a * q_ + b] = from_digits(ds, p_);
      }
    }
  }

  // Validate irreducibility by brute-force trial division: a reducible
  // modulus of degree k has a monic factor of degree <= k/2.
  if (k_ >= 2) {
    auto divides = [&](const std::vector<int>& div) {
      std::vector<int> rem = modulus_;
      int dd = static_cast<int>(div.size()) - 1;
      for (int d = static_cast<int>(rem.size()) - 1; d >= dd; --d) {
        int top = rem[d];
        if (top) {
          for (int i = 0; i <= dd; ++i)
            rem[d - dd + i] = ((rem[d - dd + i] - top * div[i]) % p_ + p_) % p_;
        }
      }
      for (int i = 0; i < dd; ++i)
        if (rem[i]) return false;
      return true;
    };
    for (int d = 1; d <= k_ / 2; ++d) {
      long count = 1;
      for (int i = 0; i < d; ++i) count *= p_;
      for (long c = 0; c < count; ++c) {
        std::vector<int> cand(d + 1, 0);
        long t = c;
        for (int i = 0; i < d; ++i) {
          cand[i] = t % p_;
          t /= p_;
        }
        cand[d] = 1;
        if (divides(cand)) throw std::logic_error("modulus for " + name() + " is reducible");
      }
    }
  }

  // Find the smallest generator of the multiplicative group.
  long n = q_ - 1;
  auto primes = prime_factors(n);
  auto raw_pow = [&](felem a, long e) {
    felem acc = 1, base = a;
    while (e) {
      if (e & 1) acc = raw_mul(acc, base);
      base = raw_mul(base, base);
      e >>= 1;
    }
    return acc;
  };
  gen_ = 1;
  if (n > 1) {
    for (felem cand = 2; cand < q_; ++cand) {
      bool ok = true;
      for (int r : primes)
        if (raw_pow(cand, n / r) == 1) {
          ok = false;
          break;
        }
      if (ok) {
        gen_ = cand;
        break;
      }
    }
  }

  exp_tab_.resize(std::max<size_t>(2 * n, 1));
  log_tab_.assign(q_, 0);
  felem cur = 1;
  for (long i = 0; i < n; ++i) {
    exp_tab_[i] = cur;
    exp_tab_[i + n] = cur;
    log_tab_[cur] = static_cast<int>(i);
    cur = raw_mul(cur, gen_);
  }
  if (cur != 1) throw std::logic_error("generator order mismatch in " + name());
}

const GF& GF::get(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<GF>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, k}];
  if (!slot) slot.reset(new GF(p, k));
  return *slot;
}

const GF& GF::parse(std::string_view s) {
  if (s.size() < 5 || s.substr(0, 3) != "GF(" || s.back() != ')')
    throw std::invalid_argument("bad field spec: " + std::string(s));
  std::string body(s.substr(3, s.size() - 4));
  auto caret = body.find('^');
  int p = std::stoi(body.substr(0, caret));
  int k = caret == std::string::npos ? 1 : std::stoi(body.substr(caret + 1));
  return get(p, k);
}

std::string GF::name() const {
  if (k_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(" + std::to_string(p_) + "^" + std::to_string(k_) + ")";
}

felem GF::inv(felem a) const {
  if (a == 0) throw std::domain_error("inverse of zero in " + name());
  long n = q_ - 1;
  return exp_tab_[(n - log_tab_[a]) % n];
}

felem GF::pow(felem a, long e) const {
  if (a == 0) {
    if (e < 0) throw std::domain_error("negative power of zero");
    return e == 0 ? 1 : 0;
  }
  long n = q_ - 1;
  long le = (static_cast<long>(log_tab_[a]) * (e % n)) % n;
  if (le < 0) le += n;
  return exp_tab_[le];
}

felem GF::from_int(long v) const {
  long r = v % p_;
  if (r < 0) r += p_;
  return static_cast<felem>(r);
}

felem GF::pth_root(felem a) const {
  felem r = a;
  for (int i = 0; i < k_ - 1; ++i) r = frobenius(r);
  return r;
}

int GF::log(felem a) const {
  if (a == 0) throw std::domain_error("log of zero in " + name());
  return log_tab_[a];
}

std::vector<int> GF::coords(felem a) const { return digits_of(a, p_, k_); }

felem GF::from_coords(std::span<const int> c) const {
  if (static_cast<int>(c.size()) != k_) throw std::invalid_argument("coordinate length mismatch");
  std::vector<int> d(c.begin(), c.end());
  for (auto& v : d) v = ((v % p_) + p_) % p_;
  return from_digits(d, p_);
}

std::string GF::format(felem a) const {
  if (a < p_) return std::to_string(a);
  return "g^" + std::to_string(log_tab_[a]);
}

felem GF::parse_elem(std::string_view s) const {
  if (s.empty()) throw std::invalid_argument("empty field element");
  if (s == "g") return gen_;
  if (s.substr(0, 2) == "g^") {
    long e = std::stol(std::string(s.substr(2)));
    return pow(gen_, e);
  }
  return from_int(std::stol(std::string(s)));
}

const std::vector<felem>& GF::embedding_into(const GF& big) const {
  for (auto& [key, tab] : embeddings_)
    if (key == &big) return tab;
  if (big.p() != p_ || big.k() % k_ != 0)
    throw std::invalid_argument(name() + " does not embed into " + big.name());
  // Find the smallest root of our modulus in the big field.
  felem root = 0;
  bool found = false;
  for (int cand = 0; cand < big.size() && !found; ++cand) {
    felem acc = 0, xp = 1;
    for (int i = 0; i <= k_; ++i) {
      acc = big.add(acc, big.mul(big.from_int(modulus_[i]), xp));
      xp = big.mul(xp, static_cast<felem>(cand));
    }
    if (acc == 0) {
      root = static_cast<felem>(cand);
      found = true;
    }
  }
  if (!found) throw std::logic_error("no embedding root found");
  std::vector<felem> tab(q_);
  for (felem a = 0; a < q_; ++a) {
    auto d = coords(a);
    felem acc = 0, rp = 1;
    for (int i = 0; i < k_; ++i) {
      acc = big.add(acc, big.mul(big.from_int(d[i]), rp));
      rp = big.mul(rp, root);
    }
    tab[a] = acc;
  }
  embeddings_.emplace_back(&big, std::move(tab));
  return embeddings_.back().second;
}

long long point_count(const GF& F, int dim, long long budget) {
  long long total = 1;
  for (int i = 0; i < dim; ++i) {
    total *= F.size();
    if (total > budget) {
      long long req = 1;
      for (int j = 0; j < dim; ++j) req *= F.size();
      throw budget_exceeded(req, budget);
    }
  }
  return total;
}

int scan_thread_count() {
  if (const char* env = std::getenv("DPFIB_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // rejection sampling keeps the stream reproducible and unbiased
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

Rng Rng::fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace dpfib
