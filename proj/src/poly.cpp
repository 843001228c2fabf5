#include "casas/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

namespace casas {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(int nvars) {
  if (nvars < 0 || nvars > kMaxVars)
    throw MathError("variable count " + std::to_string(nvars) + " out of range");
  n_ = static_cast<std::uint8_t>(nvars);
}

Monomial::Monomial(const std::vector<int>& exponents) : Monomial(static_cast<int>(exponents.size())) {
  for (int i = 0; i < n_; ++i) set(i, exponents[static_cast<std::size_t>(i)]);
}

void Monomial::set(int i, int exponent) {
  if (i < 0 || i >= n_) throw MathError("variable index out of range");
  if (exponent < 0 || exponent > 0xFFFF) throw MathError("exponent out of range");
  deg_ -= e_[static_cast<std::size_t>(i)];
  e_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(exponent);
  deg_ += static_cast<std::uint32_t>(exponent);
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (n_ != o.n_) throw MathError("monomials from different rings");
  Monomial r(*this);
  for (int i = 0; i < n_; ++i) {
    unsigned s = unsigned{e_[static_cast<std::size_t>(i)]} + o.e_[static_cast<std::size_t>(i)];
    if (s > 0xFFFF) throw MathError("exponent overflow");
    r.e_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(s);
  }
  r.deg_ = deg_ + o.deg_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (int i = 0; i < n_; ++i)
    if (e_[static_cast<std::size_t>(i)] > o.e_[static_cast<std::size_t>(i)]) return false;
  return true;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  if (!divisor.divides(*this)) throw MathError("monomial does not divide");
  Monomial r(*this);
  for (int i = 0; i < n_; ++i) r.e_[static_cast<std::size_t>(i)] -= divisor.e_[static_cast<std::size_t>(i)];
  r.deg_ = deg_ - divisor.deg_;
  return r;
}

Monomial Monomial::lcm(const Monomial& o) const {
  Monomial r(n_);
  for (int i = 0; i < n_; ++i)
    r.set(i, std::max(e_[static_cast<std::size_t>(i)], o.e_[static_cast<std::size_t>(i)]));
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r(n_);
  for (int i = 0; i < n_; ++i)
    r.set(i, std::min(e_[static_cast<std::size_t>(i)], o.e_[static_cast<std::size_t>(i)]));
  return r;
}

bool Monomial::coprime(const Monomial& o) const {
  for (int i = 0; i < n_; ++i)
    if (e_[static_cast<std::size_t>(i)] && o.e_[static_cast<std::size_t>(i)]) return false;
  return true;
}

Monomial Monomial::drop_last() const {
  Monomial r(*this);
  if (n_ > 0) r.set(n_ - 1, 0);
  return r;
}

Monomial Monomial::widen(int nvars) const {
  if (nvars < n_) throw MathError("cannot widen to fewer variables");
  Monomial r(nvars);
  for (int i = 0; i < n_; ++i) r.set(i, e_[static_cast<std::size_t>(i)]);
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = n_;
  for (int i = 0; i < n_; ++i) h = h * 1000003u ^ e_[static_cast<std::size_t>(i)];
  return h;
}

std::vector<int> Monomial::exponents() const {
  return std::vector<int>(e_.begin(), e_.begin() + n_);
}

namespace {

int grevlex_tail(const Monomial& a, const Monomial& b, int upto) {
  for (int i = upto - 1; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

}  // namespace

int compare(const Monomial& a, const Monomial& b, MonomialOrder order) {
  switch (order) {
    case MonomialOrder::grevlex:
      if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
      return grevlex_tail(a, b, a.nvars());
    case MonomialOrder::lex:
      for (int i = 0; i < a.nvars(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
      return 0;
    case MonomialOrder::eliminate_last: {
      if (a.last() != b.last()) return a.last() < b.last() ? -1 : 1;
      int da = a.degree() - a.last(), db = b.degree() - b.last();
      if (da != db) return da < db ? -1 : 1;
      return grevlex_tail(a, b, a.nvars() - 1);
    }
  }
  return 0;
}

Ring::Ring(int n, Field f, MonomialOrder o) : nvars(n), field(f), order(o) {
  if (n < 0 || n > kMaxVars) throw MathError("variable count " + std::to_string(n) + " out of range");
}

// --------------------------------------------------------------- MultiPoly

namespace {

void check_same_ring(const Ring& a, const Ring& b) {
  if (!(a == b)) throw MathError("polynomials from different rings");
}

}  // namespace

MultiPoly MultiPoly::constant(const Ring& ring, const Scalar& c) {
  return monomial(ring, Monomial(ring.nvars), c);
}

MultiPoly MultiPoly::constant(const Ring& ring, long long c) {
  return constant(ring, Scalar::from_int(ring.field, c));
}

MultiPoly MultiPoly::variable(const Ring& ring, int k) {
  if (k < 1 || k > ring.nvars) throw MathError("variable x" + std::to_string(k) + " not in ring");
  Monomial m(ring.nvars);
  m.set(k - 1, 1);
  return monomial(ring, m, Scalar::one(ring.field));
}

MultiPoly MultiPoly::monomial(const Ring& ring, const Monomial& m, const Scalar& c) {
  if (m.nvars() != ring.nvars) throw MathError("monomial has wrong variable count");
  MultiPoly p(ring);
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

MultiPoly MultiPoly::from_terms(const Ring& ring, std::vector<Term> terms) {
  const auto order = ring.order;
  std::sort(terms.begin(), terms.end(),
            [order](const Term& a, const Term& b) { return compare(a.mono, b.mono, order) > 0; });
  MultiPoly p(ring);
  for (auto& t : terms) {
    if (t.mono.nvars() != ring.nvars) throw MathError("monomial has wrong variable count");
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
  return p;
}

const Term& MultiPoly::leading_term() const {
  if (terms_.empty()) throw MathError("zero polynomial has no leading term");
  return terms_.front();
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

int MultiPoly::degree_in(int k) const {
  if (k < 1 || k > ring_.nvars) throw MathError("variable index out of range");
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono[k - 1]);
  return d;
}

Scalar MultiPoly::coefficient(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.mono == m) return t.coeff;
  return Scalar::zero(ring_.field);
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_same_ring(ring_, o.ring_);
  MultiPoly r(ring_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    int c;
    if (i == terms_.size()) c = -1;
    else if (j == o.terms_.size()) c = 1;
    else c = compare(terms_[i].mono, o.terms_[j].mono, ring_.order);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Scalar s = terms_[i].coeff + o.terms_[j].coeff;
      if (!s.is_zero()) r.terms_.push_back({terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::sub_mul_term(const Scalar& c, const Monomial& m, const MultiPoly& g) const {
  check_same_ring(ring_, g.ring_);
  MultiPoly r(ring_);
  if (c.is_zero()) return *this;
  r.terms_.reserve(terms_.size() + g.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < g.terms_.size()) {
    int cmp;
    Monomial gm;
    if (j < g.terms_.size()) gm = g.terms_[j].mono * m;
    if (i == terms_.size()) cmp = -1;
    else if (j == g.terms_.size()) cmp = 1;
    else cmp = compare(terms_[i].mono, gm, ring_.order);
    if (cmp > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (cmp < 0) {
      r.terms_.push_back({gm, -(c * g.terms_[j].coeff)});
      ++j;
    } else {
      Scalar s = terms_[i].coeff - c * g.terms_[j].coeff;
      if (!s.is_zero()) r.terms_.push_back({gm, std::move(s)});
      ++i;
      ++j;
    }
  }
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_same_ring(ring_, o.ring_);
  if (is_zero() || o.is_zero()) return MultiPoly(ring_);
  std::unordered_map<Monomial, Scalar, MonomialHash> acc;
  acc.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Monomial m = a.mono * b.mono;
      auto it = acc.find(m);
      if (it == acc.end()) acc.emplace(m, a.coeff * b.coeff);
      else it->second += a.coeff * b.coeff;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (!c.is_zero()) out.push_back({m, c});
  return from_terms(ring_, std::move(out));
}

MultiPoly MultiPoly::scale(const Scalar& c) const {
  if (c.is_zero()) return MultiPoly(ring_);
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

MultiPoly MultiPoly::mul_term(const Monomial& m, const Scalar& c) const {
  if (c.is_zero()) return MultiPoly(ring_);
  MultiPoly r(ring_);
  r.terms_.reserve(terms_.size());
  // multiplying by a monomial preserves every admissible order
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = constant(ring_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

MultiPoly MultiPoly::monic() const {
  if (is_zero()) return *this;
  return scale(leading_coeff().inverse());
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (!(ring_ == o.ring_) || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].mono == o.terms_[i].mono) || !(terms_[i].coeff == o.terms_[i].coeff)) return false;
  return true;
}

MultiPoly MultiPoly::with_order(MonomialOrder order) const {
  return from_terms(ring_.with_order(order), terms_);
}

MultiPoly MultiPoly::widen(const Ring& larger) const {
  if (larger.nvars < ring_.nvars || !(larger.field == ring_.field))
    throw MathError("cannot widen into the requested ring");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.mono.widen(larger.nvars), t.coeff});
  return from_terms(larger, std::move(out));
}

MultiPoly MultiPoly::narrow(const Ring& smaller) const {
  if (smaller.nvars > ring_.nvars || !(smaller.field == ring_.field))
    throw MathError("cannot narrow into the requested ring");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    Monomial m(smaller.nvars);
    for (int i = 0; i < ring_.nvars; ++i) {
      if (i < smaller.nvars) m.set(i, t.mono[i]);
      else if (t.mono[i] != 0) throw MathError("polynomial uses a variable outside the smaller ring");
    }
    out.push_back({m, t.coeff});
  }
  return from_terms(smaller, std::move(out));
}

namespace {

std::string render_monomial(const Monomial& m) {
  std::string s;
  for (int i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i + 1);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

}  // namespace

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    Scalar c = t.coeff;
    bool negative = c.is_negative_rational();
    if (negative) c = -c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono = render_monomial(t.mono);
    if (mono.empty()) {
      out += c.to_bare_string();
    } else if (c.is_one()) {
      out += mono;
    } else {
      out += c.to_bare_string() + "*" + mono;
    }
  }
  return out;
}

// ------------------------------------------------------------------ parser

ParseError::ParseError(const std::string& what, std::size_t position)
    : MathError(what + " at position " + std::to_string(position)), pos_(position) {}

namespace {

class Parser {
public:
  Parser(const Ring& ring, std::string_view text) : ring_(ring), s_(text) {}

  MultiPoly parse() {
    MultiPoly r = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return r;
  }

private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expr() {
    skip_ws();
    MultiPoly acc(ring_);
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else break;
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  MultiPoly factor() {
    MultiPoly base = atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      unsigned long e = read_uint();
      if (e > 0xFFFF) throw ParseError("exponent too large", start);
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  unsigned long read_uint() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected an integer", start);
    std::string digits(s_.substr(start, pos_ - start));
    if (digits.size() > 18) throw ParseError("integer too long", start);
    return std::stoul(digits);
  }

  MultiPoly atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string lit(s_.substr(start, pos_ - start));
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        std::size_t dstart = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (dstart == pos_) throw ParseError("expected a denominator", dstart);
        lit += "/" + std::string(s_.substr(dstart, pos_ - dstart));
      }
      try {
        return MultiPoly::constant(ring_, Scalar::parse(ring_.field, lit));
      } catch (const DivisionByZero&) {
        throw ParseError("zero denominator", start);
      }
    }
    if (c == 'x' || c == 'X') {
      std::size_t start = pos_;
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        unsigned long k = read_uint();
        if (k < 1 || k > static_cast<unsigned long>(ring_.nvars))
          throw ParseError("variable x" + std::to_string(k) + " not in ring", start);
        return MultiPoly::variable(ring_, static_cast<int>(k));
      }
      if (ring_.nvars == 1) return MultiPoly::variable(ring_, 1);
      throw ParseError("bare variable name is ambiguous", start);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  const Ring& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly MultiPoly::parse(const Ring& ring, std::string_view text) { return Parser(ring, text).parse(); }

// ------------------------------------------------------- derived operators

Homogeneity is_homogeneous(const MultiPoly& f) {
  Homogeneity h;
  if (f.is_zero()) return h;
  h.degree = f.terms().front().mono.degree();
  for (const auto& t : f.terms()) {
    if (t.mono.degree() != h.degree) {
      h.homogeneous = false;
      break;
    }
  }
  return h;
}

MultiPoly product_of_variables(const Ring& ring, int m) {
  if (m < 0 || m > ring.nvars) throw MathError("product of variables out of range");
  Monomial mono(ring.nvars);
  for (int i = 0; i < m; ++i) mono.set(i, 1);
  return MultiPoly::monomial(ring, mono, Scalar::one(ring.field));
}

MultiPoly elementary_symmetric(const Ring& ring, int k, int m) {
  if (m < 0) m = ring.nvars;
  if (m > ring.nvars) throw MathError("elementary symmetric polynomial needs more variables");
  if (k < 0 || k > m) return MultiPoly(ring);
  std::vector<Term> terms;
  // walk all k-subsets of {0..m-1} by bitmask order of combinations
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    Monomial mono(ring.nvars);
    for (int i : idx) mono.set(i, 1);
    terms.push_back({mono, Scalar::one(ring.field)});
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return MultiPoly::from_terms(ring, std::move(terms));
}

MultiPoly hasse_derivation_multi(const MultiPoly& f, int i) {
  if (i < 0) throw MathError("Hasse-Schmidt order must be nonnegative");
  const Ring& ring = f.ring();
  const int n = ring.nvars;
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (t.mono.degree() < i) continue;
    std::vector<int> j(static_cast<std::size_t>(n), 0);
    // depth-first distribution of i among the variables with j_l <= alpha_l
    std::function<void(int, int, mpz_class)> rec = [&](int var, int left, mpz_class weight) {
      if (var == n) {
        if (left != 0) return;
        Monomial m(n);
        for (int l = 0; l < n; ++l) m.set(l, t.mono[l] - j[static_cast<std::size_t>(l)]);
        out.push_back({m, t.coeff * Scalar::from_mpz(ring.field, weight)});
        return;
      }
      int cap = std::min(left, t.mono[var]);
      for (int take = 0; take <= cap; ++take) {
        j[static_cast<std::size_t>(var)] = take;
        rec(var + 1, left - take,
            weight * binomial(static_cast<unsigned long>(t.mono[var]), static_cast<unsigned long>(take)));
      }
      j[static_cast<std::size_t>(var)] = 0;
    };
    rec(0, i, mpz_class(1));
  }
  return MultiPoly::from_terms(ring, std::move(out));
}

// ---------------------------------------------------------------- RingEndo

RingEndo::RingEndo(Ring ring, std::vector<MultiPoly> images) : ring_(std::move(ring)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != ring_.nvars)
    throw MathError("endomorphism needs one image per variable");
  for (const auto& g : images_)
    if (!(g.ring() == ring_)) throw MathError("endomorphism image lives in another ring");
}

RingEndo RingEndo::identity(const Ring& ring) {
  std::vector<MultiPoly> imgs;
  for (int k = 1; k <= ring.nvars; ++k) imgs.push_back(MultiPoly::variable(ring, k));
  return RingEndo(ring, std::move(imgs));
}

MultiPoly RingEndo::apply(const MultiPoly& f) const {
  check_same_ring(f.ring(), ring_);
  std::map<std::pair<int, int>, MultiPoly> powers;
  std::function<const MultiPoly&(int, int)> power = [&](int var, int e) -> const MultiPoly& {
    auto key = std::make_pair(var, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    const MultiPoly& img = images_[static_cast<std::size_t>(var)];
    MultiPoly p = e == 1 ? img : power(var, e - 1) * img;
    return powers.emplace(key, std::move(p)).first->second;
  };
  MultiPoly result(ring_);
  for (const auto& t : f.terms()) {
    MultiPoly prod = MultiPoly::constant(ring_, t.coeff);
    for (int v = 0; v < ring_.nvars; ++v)
      if (t.mono[v] > 0) prod = prod * power(v, t.mono[v]);
    result += prod;
  }
  return result;
}

RingEndo RingEndo::compose(const RingEndo& inner) const {
  check_same_ring(inner.ring_, ring_);
  std::vector<MultiPoly> imgs;
  for (const auto& g : inner.images_) imgs.push_back(apply(g));
  return RingEndo(ring_, std::move(imgs));
}

bool RingEndo::is_identity() const { return *this == identity(ring_); }

bool RingEndo::operator==(const RingEndo& o) const { return ring_ == o.ring_ && images_ == o.images_; }

RingEndo phi_endo(const Ring& ring, int d, int j) {
  if (d < 1 || d > ring.nvars) throw MathError("phi_endo: d=" + std::to_string(d) + " outside the ring");
  if (j < 1 || j > d + 1)
    throw MathError("phi_endo: index j=" + std::to_string(j) + " outside [1, " + std::to_string(d + 1) + "]");
  RingEndo id = RingEndo::identity(ring);
  if (j == d + 1) return id;
  std::vector<MultiPoly> imgs = id.images();
  MultiPoly xj = MultiPoly::variable(ring, j);
  for (int l = 1; l <= d; ++l) {
    auto& img = imgs[static_cast<std::size_t>(l - 1)];
    img = (l == j) ? -xj : MultiPoly::variable(ring, l) - xj;
  }
  return RingEndo(ring, std::move(imgs));
}

RingEndo phi_endo(const Field& field, int d, int j) { return phi_endo(Ring(d, field), d, j); }

RingEndo swap_endo(const Ring& ring, int l, int m) {
  if (l < 1 || l > ring.nvars || m < 1 || m > ring.nvars) throw MathError("swap_endo: index out of range");
  RingEndo id = RingEndo::identity(ring);
  std::vector<MultiPoly> imgs = id.images();
  std::swap(imgs[static_cast<std::size_t>(l - 1)], imgs[static_cast<std::size_t>(m - 1)]);
  return RingEndo(ring, std::move(imgs));
}

MultiPoly coeff_of_last_var(const MultiPoly& f, int k) {
  const Ring& ring = f.ring();
  if (ring.nvars == 0) throw MathError("ring has no variables");
  std::vector<Term> out;
  for (const auto& t : f.terms())
    if (t.mono.last() == k) out.push_back({t.mono.drop_last(), t.coeff});
  return MultiPoly::from_terms(ring, std::move(out));
}

MultiPoly leading_coeff_in_last_var(const MultiPoly& f, int k) {
  if (f.ring().nvars == 0) throw MathError("ring has no variables");
  if (f.degree_in(f.ring().nvars) > k)
    throw MathError("lambda_{n,k}: polynomial has x_n-degree above " + std::to_string(k));
  return coeff_of_last_var(f, k);
}

MultiPoly leading_coeff_last_var(const MultiPoly& f) {
  if (f.is_zero()) return f;
  return coeff_of_last_var(f, f.degree_in(f.ring().nvars));
}

// ----------------------------------------------------------------- UniPoly

UniPoly::UniPoly(Field field, std::vector<Scalar> coeffs) : field_(field), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (!(c.field() == field_)) throw FieldMismatch();
  trim();
}

UniPoly UniPoly::from_ints(const Field& field, const std::vector<long long>& coeffs) {
  std::vector<Scalar> c;
  for (auto v : coeffs) c.push_back(Scalar::from_int(field, v));
  return UniPoly(field, std::move(c));
}

UniPoly UniPoly::x_minus(const Scalar& a) {
  Field f = a.field();
  return UniPoly(f, {-a, Scalar::one(f)});
}

UniPoly UniPoly::monomial(const Field& field, int degree) {
  std::vector<Scalar> c(static_cast<std::size_t>(degree + 1), Scalar::zero(field));
  c.back() = Scalar::one(field);
  return UniPoly(field, std::move(c));
}

UniPoly UniPoly::from_multi(const MultiPoly& f) {
  if (f.ring().nvars != 1) throw MathError("univariate polynomial expected in one variable");
  UniPoly u(f.ring().field);
  if (f.is_zero()) return u;
  u.c_.assign(static_cast<std::size_t>(f.total_degree() + 1), Scalar::zero(u.field_));
  for (const auto& t : f.terms()) u.c_[static_cast<std::size_t>(t.mono[0])] = t.coeff;
  u.trim();
  return u;
}

UniPoly UniPoly::parse(const Field& field, std::string_view text) {
  return from_multi(MultiPoly::parse(Ring(1, field), text));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar UniPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return Scalar::zero(field_);
  return c_[static_cast<std::size_t>(i)];
}

const Scalar& UniPoly::leading() const {
  if (c_.empty()) throw MathError("zero polynomial has no leading coefficient");
  return c_.back();
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  if (!(field_ == o.field_)) throw FieldMismatch();
  std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), Scalar::zero(field_));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return UniPoly(field_, std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + o.scale(Scalar::from_int(field_, -1)); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (!(field_ == o.field_)) throw FieldMismatch();
  if (is_zero() || o.is_zero()) return UniPoly(field_);
  std::vector<Scalar> r(c_.size() + o.c_.size() - 1, Scalar::zero(field_));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return UniPoly(field_, std::move(r));
}

UniPoly UniPoly::scale(const Scalar& c) const {
  std::vector<Scalar> r = c_;
  for (auto& x : r) x *= c;
  return UniPoly(field_, std::move(r));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& divisor) const {
  if (divisor.is_zero()) throw DivisionByZero();
  if (!(field_ == divisor.field_)) throw FieldMismatch();
  std::vector<Scalar> rem = c_;
  int dd = divisor.degree();
  if (degree() < dd) return {UniPoly(field_), *this};
  std::vector<Scalar> quot(static_cast<std::size_t>(degree() - dd + 1), Scalar::zero(field_));
  Scalar inv_lead = divisor.leading().inverse();
  for (int k = degree(); k >= dd; --k) {
    Scalar q = rem[static_cast<std::size_t>(k)] * inv_lead;
    quot[static_cast<std::size_t>(k - dd)] = q;
    if (q.is_zero()) continue;
    for (int i = 0; i <= dd; ++i)
      rem[static_cast<std::size_t>(k - dd + i)] -= q * divisor.c_[static_cast<std::size_t>(i)];
  }
  return {UniPoly(field_, std::move(quot)), UniPoly(field_, std::move(rem))};
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scale(leading().inverse());
}

UniPoly UniPoly::pow(unsigned e) const {
  UniPoly r = from_ints(field_, {1});
  UniPoly base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

Scalar UniPoly::eval(const Scalar& x) const {
  Scalar acc = Scalar::zero(field_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

bool UniPoly::operator==(const UniPoly& o) const { return field_ == o.field_ && c_ == o.c_; }

MultiPoly UniPoly::to_multi() const {
  Ring r(1, field_);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) terms.push_back({Monomial({static_cast<int>(i)}), c_[i]});
  return MultiPoly::from_terms(r, std::move(terms));
}

std::string UniPoly::to_string() const { return to_multi().to_string(); }

UniPoly hasse_derivative_uni(const UniPoly& f, int i) {
  if (i < 0) throw MathError("Hasse-Schmidt order must be nonnegative");
  if (i > f.degree()) return UniPoly(f.field());
  std::vector<Scalar> r;
  for (int k = i; k <= f.degree(); ++k)
    r.push_back(f.coeff(k) * Scalar::from_mpz(f.field(), binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(i))));
  return UniPoly(f.field(), std::move(r));
}

UniPoly uni_gcd(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero() && g.is_zero()) throw MathError("gcd(0, 0) is undefined");
  UniPoly a = f, b = g;
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Scalar bareiss_determinant(std::vector<std::vector<Scalar>> m, const Field& field) {
  const std::size_t n = m.size();
  if (n == 0) return Scalar::one(field);
  Scalar sign = Scalar::one(field);
  Scalar scale_back = Scalar::one(field);
  if (field.is_rational()) {
    // clear denominators row by row so elimination runs on integers
    for (auto& row : m) {
      mpz_class l = 1;
      for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.as_rational()->denominator().get_mpz_t());
      Scalar s = Scalar::from_mpz(field, l);
      for (auto& x : row) x *= s;
      scale_back *= s;
    }
  }
  Scalar prev = Scalar::one(field);
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k].is_zero()) ++swap;
      if (swap == n) return Scalar::zero(field);
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    if (k + 1 == n) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // exact division in the Bareiss recurrence
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = Scalar::zero(field);
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1] / scale_back;
}

Scalar resultant(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero() || g.is_zero()) throw MathError("resultant of a zero polynomial");
  if (!(f.field() == g.field())) throw FieldMismatch();
  const Field field = f.field();
  const int m = f.degree(), n = g.degree();
  const int size = m + n;
  if (size == 0) return Scalar::one(field);
  std::vector<std::vector<Scalar>> mat(static_cast<std::size_t>(size),
                                       std::vector<Scalar>(static_cast<std::size_t>(size), Scalar::zero(field)));
  // m rows of g, then n rows of f; columns run from the highest power down
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = g.coeff(n - k);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) mat[static_cast<std::size_t>(m + r)][static_cast<std::size_t>(r + k)] = f.coeff(m - k);
  return bareiss_determinant(std::move(mat), field);
}

}  // namespace casas
