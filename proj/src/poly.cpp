#include "dpfib/poly.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace dpfib {

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (size_t i = 0; i < exps.size(); ++i) {
    int e = r.exps[i] + o.exps[i];
    if (e > 255) throw std::overflow_error("monomial exponent overflow");
    r.exps[i] = static_cast<std::uint8_t>(e);
  }
  return r;
}

std::shared_ptr<const Ring> Ring::make(std::vector<std::string> names) {
  return std::shared_ptr<const Ring>(new Ring(std::move(names)));
}

int Ring::index_of(std::string_view name) const {
  for (int i = 0; i < nvars(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

Poly Poly::constant(RingPtr ring, const GF& F, felem c) {
  Poly f(std::move(ring), F);
  if (c != 0) f.terms_[Monomial(f.ring_->nvars())] = c;
  return f;
}

Poly Poly::variable(RingPtr ring, const GF& F, int var) {
  Poly f(ring, F);
  f.terms_[Monomial::unit(ring->nvars(), var)] = F.one();
  return f;
}

felem Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void Poly::add_term(const Monomial& m, felem c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second = F_->add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

int Poly::total_degree() const {
  int d = -1;
  for (auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

int Poly::degree_in(int var) const {
  int d = 0;
  for (auto& [m, c] : terms_) d = std::max<int>(d, m.exps[var]);
  return d;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.terms_) r.add_term(m, F_->neg(c));
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = F_->neg(c);
  return r;
}

Poly Poly::scaled(felem c) const {
  Poly r(ring_, *F_);
  if (c == 0) return r;
  for (auto& [m, a] : terms_) r.terms_[m] = F_->mul(a, c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(ring_, *F_);
  for (auto& [ma, ca] : terms_)
    for (auto& [mb, cb] : o.terms_) r.add_term(ma * mb, F_->mul(ca, cb));
  return r;
}

Poly Poly::pow(int e) const {
  Poly acc = Poly::constant(ring_, *F_, F_->one());
  Poly base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

felem Poly::eval(std::span<const felem> point) const {
  felem acc = 0;
  for (auto& [m, c] : terms_) {
    felem v = c;
    for (size_t i = 0; i < m.exps.size(); ++i)
      if (m.exps[i]) v = F_->mul(v, F_->pow(point[i], m.exps[i]));
    acc = F_->add(acc, v);
  }
  return acc;
}

Poly Poly::derivative(int var) const {
  Poly r(ring_, *F_);
  for (auto& [m, c] : terms_) {
    int e = m.exps[var];
    if (e == 0) continue;
    felem nc = F_->mul(c, F_->from_int(e));
    if (nc == 0) continue;
    Monomial nm = m;
    nm.exps[var] = static_cast<std::uint8_t>(e - 1);
    r.add_term(nm, nc);
  }
  return r;
}

Poly Poly::at(int var, felem c) const {
  Poly r(ring_, *F_);
  for (auto& [m, a] : terms_) {
    int e = m.exps[var];
    felem nc = e ? F_->mul(a, F_->pow(c, e)) : a;
    if (nc == 0) continue;
    Monomial nm = m;
    nm.exps[var] = 0;
    r.add_term(nm, nc);
  }
  return r;
}

Poly Poly::substituted(int var, const Poly& repl, int degree_cap) const {
  Poly r(ring_, *F_);
  std::vector<Poly> powers = {Poly::constant(ring_, *F_, F_->one())};
  for (auto& [m, c] : terms_) {
    int e = m.exps[var];
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * repl);
    Monomial rest = m;
    rest.exps[var] = 0;
    for (auto& [pm, pc] : powers[e].terms_) {
      Monomial nm = rest * pm;
      if (degree_cap >= 0 && nm.degree() >= degree_cap) continue;
      r.add_term(nm, F_->mul(c, pc));
    }
  }
  return r;
}

Poly Poly::translated(std::span<const felem> point, int degree_cap) const {
  // substitute exactly and truncate at the end: truncating between the
  // per-variable substitutions is unsound, a high-degree cross term can
  // fall back below the cap once a later variable plugs in its constant
  Poly r = *this;
  for (int v = 0; v < ring_->nvars(); ++v) {
    if (point[v] == 0) continue;
    Poly repl = Poly::variable(ring_, *F_, v) + Poly::constant(ring_, *F_, point[v]);
    r = r.substituted(v, repl);
  }
  if (degree_cap >= 0) {
    Poly s(ring_, *F_);
    for (auto& [m, c] : r.terms_)
      if (m.degree() < degree_cap) s.terms_[m] = c;
    return s;
  }
  return r;
}

Poly Poly::without_vars(const std::vector<int>& vars, RingPtr target) const {
  std::vector<bool> drop(ring_->nvars(), false);
  for (int v : vars) drop[v] = true;
  std::vector<int> remap;
  for (int v = 0; v < ring_->nvars(); ++v)
    if (!drop[v]) remap.push_back(v);
  if (static_cast<int>(remap.size()) != target->nvars())
    throw std::invalid_argument("target ring size mismatch");
  Poly r(target, *F_);
  for (auto& [m, c] : terms_) {
    Monomial nm(target->nvars());
    for (int v : vars)
      if (m.exps[v]) throw std::invalid_argument("variable not eliminated: " + ring_->name(v));
    for (size_t i = 0; i < remap.size(); ++i) nm.exps[i] = m.exps[remap[i]];
    r.terms_[nm] = c;
  }
  return r;
}

Poly Poly::mapped_into(const GF& big) const {
  const auto& emb = F_->embedding_into(big);
  Poly r(ring_, big);
  for (auto& [m, c] : terms_) r.terms_[m] = emb[c];
  return r;
}

Poly Poly::stripped_pth_powers() const {
  int p = F_->p();
  Poly r(ring_, *F_);
  for (auto& [m, c] : terms_) {
    bool all_div = true;
    for (auto e : m.exps)
      if (e % p) {
        all_div = false;
        break;
      }
    if (!all_div) r.terms_[m] = c;
  }
  return r;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << F_->format(c);
    for (size_t v = 0; v < m.exps.size(); ++v) {
      if (!m.exps[v]) continue;
      os << "*" << ring_->name(v);
      if (m.exps[v] > 1) os << "^" << static_cast<int>(m.exps[v]);
    }
  }
  return os.str();
}

namespace {

void skip_ws(std::string_view s, size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

}  // namespace

Poly Poly::parse(RingPtr ring, const GF& F, std::string_view text) {
  Poly result(ring, F);
  size_t i = 0;
  skip_ws(text, i);
  if (i == text.size()) throw std::invalid_argument("empty polynomial");
  while (i < text.size()) {
    felem coeff = F.one();
    Monomial m(ring->nvars());
    bool saw_factor = false, saw_coeff = false;
    for (;;) {
      skip_ws(text, i);
      if (i >= text.size()) break;
      char ch = text[i];
      if (ch == '+' && saw_coeff == false && saw_factor == false)
        throw std::invalid_argument("stray '+' in polynomial");
      if (ch == '+') break;
      if (ch == '*') {
        ++i;
        continue;
      }
      if (ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
        size_t j = i + (ch == '-' ? 1 : 0);
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        coeff = F.mul(coeff, F.from_int(std::stol(std::string(text.substr(i, j - i)))));
        i = j;
        saw_coeff = true;
        continue;
      }
      if (ch == 'g' &&
          (i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1])) ||
           text[i + 1] == '^') &&
          ring->index_of("g") < 0) {
        size_t j = i + 1;
        long e = 1;
        if (j < text.size() && text[j] == '^') {
          size_t k = ++j;
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          e = std::stol(std::string(text.substr(j, k - j)));
          j = k;
        }
        coeff = F.mul(coeff, F.pow(F.generator(), e));
        i = j;
        saw_coeff = true;
        continue;
      }
      // variable name: longest match against the ring
      int best = -1;
      size_t best_len = 0;
      for (int v = 0; v < ring->nvars(); ++v) {
        const auto& nm = ring->name(v);
        if (text.substr(i, nm.size()) == nm && nm.size() > best_len) {
          best = v;
          best_len = nm.size();
        }
      }
      if (best < 0) throw std::invalid_argument("unknown symbol at '" + std::string(text.substr(i)) + "'");
      i += best_len;
      int e = 1;
      if (i < text.size() && text[i] == '^') {
        size_t j = ++i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        e = std::stoi(std::string(text.substr(i, j - i)));
        i = j;
      }
      m.exps[best] = static_cast<std::uint8_t>(m.exps[best] + e);
      saw_factor = true;
    }
    if (!saw_coeff && !saw_factor) throw std::invalid_argument("empty term");
    result.add_term(m, coeff);
    skip_ws(text, i);
    if (i < text.size()) {
      if (text[i] != '+') throw std::invalid_argument("expected '+'");
      ++i;
      skip_ws(text, i);
      if (i == text.size()) throw std::invalid_argument("trailing '+'");
    }
  }
  return result;
}

PowTable::PowTable(const GF& F, int max_exp) : stride(max_exp + 1) {
  tab.resize(static_cast<size_t>(F.size()) * stride);
  for (int a = 0; a < F.size(); ++a)
    for (int e = 0; e <= max_exp; ++e)
      tab[a * stride + e] = F.pow(static_cast<felem>(a), e);
}

CompiledPoly::CompiledPoly(const Poly& f) {
  for (auto& [m, c] : f.terms()) {
    Term t;
    t.coeff = c;
    t.begin = static_cast<std::uint32_t>(factors_.size());
    for (size_t v = 0; v < m.exps.size(); ++v)
      if (m.exps[v]) {
        factors_.push_back({static_cast<std::uint16_t>(v), m.exps[v]});
        max_exp_ = std::max<int>(max_exp_, m.exps[v]);
      }
    t.end = static_cast<std::uint32_t>(factors_.size());
    terms_.push_back(t);
  }
}

felem CompiledPoly::eval(const GF& F, std::span<const felem> pt) const {
  felem acc = 0;
  for (const auto& t : terms_) {
    felem v = t.coeff;
    for (std::uint32_t i = t.begin; i < t.end && v != 0; ++i)
      v = F.mul(v, F.pow(pt[factors_[i].var], factors_[i].exp));
    acc = F.add(acc, v);
  }
  return acc;
}

felem CompiledPoly::eval(const GF& F, const PowTable& pw, std::span<const felem> pt) const {
  felem acc = 0;
  for (const auto& t : terms_) {
    felem v = t.coeff;
    for (std::uint32_t i = t.begin; i < t.end && v != 0; ++i)
      v = F.mul(v, pw.pow(pt[factors_[i].var], factors_[i].exp));
    acc = F.add(acc, v);
  }
  return acc;
}

}  // namespace dpfib
