#include "rktensor/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

namespace rkt::gf {

namespace {

bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<uint32_t> to_digits(uint32_t code, uint32_t p, uint32_t e) {
  std::vector<uint32_t> d(e, 0);
  for (uint32_t i = 0; i < e && code; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

uint32_t from_digits(const std::vector<uint32_t>& d, uint32_t p) {
  uint32_t code = 0;
  for (size_t i = d.size(); i-- > 0;) code = code * p + d[i];
  return code;
}

}  // namespace

Poly poly_trim(Poly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

int poly_deg(const Poly& f) { return int(f.size()) - 1; }

Field::Field(uint32_t p, uint32_t e, Poly modulus)
    : p_(p), e_(e), modulus_(poly_trim(std::move(modulus))) {
  require(is_prime_u32(p), "field characteristic must be prime");
  require(e >= 1, "field extension degree must be positive");
  uint64_t q = 1;
  for (uint32_t i = 0; i < e; ++i) {
    q *= p;
    require(q <= kFieldCap, "field size exceeds cap 2^20");
  }
  q_ = uint32_t(q);
  require(poly_deg(modulus_) == int(e), "modulus degree must equal e");
  require(modulus_.back() == 1, "modulus must be monic");
  for (uint32_t c : modulus_) require(c < p, "modulus coefficients must lie in F_p");
  if (e >= 2) {
    Field prime(p, 1, Poly{0, 1});
    require(is_irreducible(prime, modulus_), "modulus is reducible");
  }

  if (p_ != 2) {
    neg_.resize(q_);
    for (uint32_t a = 0; a < q_; ++a) {
      auto d = to_digits(a, p_, e_);
      for (auto& x : d) x = (p_ - x) % p_;
      neg_[a] = from_digits(d, p_);
    }
    if (q_ <= kAddTableCap) {
      add_.resize(size_t(q_) * q_);
      for (uint32_t a = 0; a < q_; ++a) {
        auto da = to_digits(a, p_, e_);
        for (uint32_t b = 0; b < q_; ++b) {
          auto db = to_digits(b, p_, e_);
          std::vector<uint32_t> s(e_);
          for (uint32_t i = 0; i < e_; ++i) s[i] = (da[i] + db[i]) % p_;
          add_[size_t(a) * q_ + b] = from_digits(s, p_);
        }
      }
    }
  }

  // Generator: smallest code whose order is q-1.
  auto primes = prime_factors(q_ - 1);
  auto pow_slow = [&](uint32_t a, uint64_t n) {
    uint32_t r = 1;
    while (n) {
      if (n & 1) r = mul_slow(r, a);
      a = mul_slow(a, a);
      n >>= 1;
    }
    return r;
  };
  for (uint32_t c = 1; c < q_; ++c) {
    bool ok = true;
    for (uint64_t r : primes)
      if (pow_slow(c, (q_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      generator_ = c;
      break;
    }
  }
  internal_check(generator_ != 0 || q_ == 1, "no primitive element found");

  exp_.resize(2 * size_t(q_ - 1));
  log_.assign(q_, 0);
  uint32_t cur = 1;
  for (uint32_t i = 0; i < q_ - 1; ++i) {
    exp_[i] = cur;
    exp_[i + q_ - 1] = cur;
    log_[cur] = i;
    cur = mul_slow(cur, generator_);
  }
  internal_check(cur == 1, "generator order mismatch");
}

uint32_t Field::mul_slow(uint32_t a, uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  if (e_ == 1) return uint32_t((uint64_t(a) * b) % p_);
  if (p_ == 2) {
    // Carryless multiply, then reduce by the modulus bitmask.
    uint64_t acc = 0;
    for (uint32_t i = 0; i < e_; ++i)
      if ((b >> i) & 1u) acc ^= uint64_t(a) << i;
    uint64_t mmask = 0;
    for (uint32_t i = 0; i <= e_; ++i)
      if (modulus_[i]) mmask |= uint64_t(1) << i;
    for (int bit = int(2 * e_ - 2); bit >= int(e_); --bit)
      if ((acc >> bit) & 1u) acc ^= mmask << (bit - e_);
    return uint32_t(acc);
  }
  auto da = to_digits(a, p_, e_);
  auto db = to_digits(b, p_, e_);
  std::vector<uint64_t> buf(2 * e_ - 1, 0);
  for (uint32_t i = 0; i < e_; ++i)
    for (uint32_t j = 0; j < e_; ++j) buf[i + j] += uint64_t(da[i]) * db[j];
  for (auto& x : buf) x %= p_;
  for (size_t i = buf.size(); i-- > e_;) {
    uint64_t c = buf[i];
    if (!c) continue;
    buf[i] = 0;
    for (uint32_t j = 0; j < e_; ++j)
      buf[i - e_ + j] = (buf[i - e_ + j] + (p_ - 1) * c % p_ * modulus_[j]) % p_;
  }
  std::vector<uint32_t> d(e_);
  for (uint32_t i = 0; i < e_; ++i) d[i] = uint32_t(buf[i]);
  return from_digits(d, p_);
}

uint32_t Field::add(uint32_t a, uint32_t b) const {
  if (p_ == 2) return a ^ b;
  if (!add_.empty()) return add_[size_t(a) * q_ + b];
  auto da = to_digits(a, p_, e_);
  auto db = to_digits(b, p_, e_);
  for (uint32_t i = 0; i < e_; ++i) da[i] = (da[i] + db[i]) % p_;
  return from_digits(da, p_);
}

uint32_t Field::neg(uint32_t a) const {
  if (p_ == 2) return a;
  return neg_[a];
}

uint32_t Field::sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

uint32_t Field::inv(uint32_t a) const {
  require(a != 0, "inverse of zero");
  return exp_[(q_ - 1) - log_[a]];
}

uint32_t Field::div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

uint32_t Field::pow(uint32_t a, int64_t n) const {
  if (n < 0) {
    require(a != 0, "zero to a negative power");
    uint64_t mag = uint64_t(-(n + 1)) + 1;
    uint64_t r = mag % (q_ - 1);
    return pow(inv(a), int64_t(r));
  }
  if (a == 0) return n == 0 ? 1 : 0;
  if (q_ == 2) return 1;
  uint64_t r = uint64_t(n) % (q_ - 1);
  return exp_[(uint64_t(log_[a]) * r) % (q_ - 1)];
}

namespace {

std::mutex g_cache_mutex;
std::map<std::pair<uint32_t, uint32_t>, FieldPtr> g_cache;

Poly canonical_modulus(uint32_t p, uint32_t e) {
  if (e == 1) return Poly{0, 1};
  Field prime(p, 1, Poly{0, 1});
  uint64_t span = 1;
  for (uint32_t i = 0; i < e; ++i) span *= p;
  for (uint64_t v = 0; v < span; ++v) {
    Poly f(e + 1, 0);
    uint64_t t = v;
    for (uint32_t i = 0; i < e; ++i) {
      f[i] = uint32_t(t % p);
      t /= p;
    }
    f[e] = 1;
    if (is_irreducible(prime, f)) return f;
  }
  throw InternalError("no irreducible modulus found");
}

}  // namespace

FieldPtr make_field(uint32_t p, uint32_t e) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto key = std::make_pair(p, e);
  auto it = g_cache.find(key);
  if (it != g_cache.end()) return it->second;
  auto F = std::make_shared<const Field>(p, e, canonical_modulus(p, e));
  g_cache[key] = F;
  return F;
}

FieldPtr make_field_with_modulus(uint32_t p, uint32_t e, Poly modulus) {
  return std::make_shared<const Field>(p, e, std::move(modulus));
}

Poly poly_add(const Field& F, const Poly& f, const Poly& g) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint32_t a = i < f.size() ? f[i] : 0;
    uint32_t b = i < g.size() ? g[i] : 0;
    r[i] = F.add(a, b);
  }
  return poly_trim(std::move(r));
}

Poly poly_sub(const Field& F, const Poly& f, const Poly& g) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint32_t a = i < f.size() ? f[i] : 0;
    uint32_t b = i < g.size() ? g[i] : 0;
    r[i] = F.sub(a, b);
  }
  return poly_trim(std::move(r));
}

Poly poly_mul(const Field& F, const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (!f[i]) continue;
    for (size_t j = 0; j < g.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(f[i], g[j]));
  }
  return poly_trim(std::move(r));
}

Poly poly_mod(const Field& F, Poly f, const Poly& g) {
  f = poly_trim(std::move(f));
  Poly gg = poly_trim(g);
  require(!gg.empty(), "polynomial division by zero");
  uint32_t lead_inv = F.inv(gg.back());
  while (f.size() >= gg.size()) {
    uint32_t c = F.mul(f.back(), lead_inv);
    size_t shift = f.size() - gg.size();
    for (size_t i = 0; i < gg.size(); ++i)
      f[shift + i] = F.sub(f[shift + i], F.mul(c, gg[i]));
    f = poly_trim(std::move(f));
    if (f.size() < gg.size()) break;
  }
  return f;
}

Poly poly_make_monic(const Field& F, Poly f) {
  f = poly_trim(std::move(f));
  if (f.empty()) return f;
  uint32_t li = F.inv(f.back());
  for (auto& c : f) c = F.mul(c, li);
  return f;
}

Poly poly_gcd(const Field& F, Poly f, Poly g) {
  f = poly_trim(std::move(f));
  g = poly_trim(std::move(g));
  while (!g.empty()) {
    Poly r = poly_mod(F, f, g);
    f = std::move(g);
    g = std::move(r);
  }
  return poly_make_monic(F, std::move(f));
}

uint32_t poly_eval(const Field& F, const Poly& f, uint32_t x) {
  uint32_t acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
  return acc;
}

namespace {

Poly poly_mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) {
  return poly_mod(F, poly_mul(F, a, b), m);
}

Poly poly_powmod(const Field& F, Poly base, uint64_t n, const Poly& m) {
  Poly r{1};
  base = poly_mod(F, std::move(base), m);
  while (n) {
    if (n & 1) r = poly_mulmod(F, r, base, m);
    base = poly_mulmod(F, base, base, m);
    n >>= 1;
  }
  return r;
}

}  // namespace

bool is_irreducible(const Field& F, const Poly& f_in) {
  Poly f = poly_make_monic(F, f_in);
  int k = poly_deg(f);
  if (k <= 0) return false;
  if (k == 1) return true;
  auto primes = prime_factors(uint64_t(k));
  std::vector<uint64_t> gcd_steps;
  for (uint64_t r : primes) gcd_steps.push_back(uint64_t(k) / r);
  Poly x{0, 1};
  Poly t = x;
  for (uint64_t j = 1; j <= uint64_t(k); ++j) {
    t = poly_powmod(F, t, F.q(), f);
    if (std::find(gcd_steps.begin(), gcd_steps.end(), j) != gcd_steps.end()) {
      Poly g = poly_gcd(F, poly_sub(F, t, x), f);
      if (poly_deg(g) != 0) return false;
    }
  }
  // After k Frobenius iterations t = x^{q^k} mod f; irreducible iff it is x.
  return t == x;
}

Poly find_irreducible(const Field& F, uint32_t k, uint64_t seed) {
  require(k >= 1, "degree must be positive");
  std::mt19937_64 rng(seed);
  for (uint64_t tries = 0; tries < 2000000; ++tries) {
    Poly f(k + 1, 0);
    for (uint32_t i = 0; i < k; ++i) f[i] = uint32_t(rng() % F.q());
    f[k] = 1;
    if (is_irreducible(F, f)) return f;
  }
  throw InternalError("irreducible search did not terminate");
}

std::string poly_to_string(const Field& F, const Poly& f_in) {
  (void)F;
  Poly f = poly_trim(f_in);
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = f.size(); i-- > 0;) {
    if (!f[i]) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << f[i];
    } else {
      if (f[i] != 1) os << f[i] << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

Tower make_tower(const FieldPtr& base, uint32_t m) {
  require(base != nullptr, "null base field");
  require(m >= 1, "tower degree must be positive");
  uint64_t size = 1;
  for (uint32_t i = 0; i < uint64_t(base->e()) * m; ++i) {
    size *= base->p();
    require(size <= kFieldCap, "extension field exceeds cap 2^20");
  }
  Tower tw;
  tw.base = base;
  tw.m = m;
  tw.ext = make_field(base->p(), base->e() * m);
  const Field& E = *tw.ext;
  tw.emb.resize(base->q());
  if (base->e() == 1) {
    tw.root = 0;
    for (uint32_t c = 0; c < base->q(); ++c) tw.emb[c] = c;
  } else {
    uint32_t root = 0;
    bool found = false;
    for (uint32_t z = 0; z < E.q(); ++z) {
      if (poly_eval(E, base->modulus(), z) == 0) {
        root = z;
        found = true;
        break;
      }
    }
    internal_check(found, "base modulus has no root in the extension");
    tw.root = root;
    for (uint32_t c = 0; c < base->q(); ++c) {
      auto d = to_digits(c, base->p(), base->e());
      uint32_t acc = 0;
      for (size_t i = d.size(); i-- > 0;) acc = E.add(E.mul(acc, root), d[i]);
      tw.emb[c] = acc;
    }
  }
  uint32_t g = base->generator();
  internal_check(
      tw.emb[base->mul(g, g)] == E.mul(tw.emb[g], tw.emb[g]) &&
          tw.emb[base->add(g, 1)] == E.add(tw.emb[g], 1),
      "embedding is not a homomorphism");
  return tw;
}

SubfieldBasis::SubfieldBasis(Tower tw, std::vector<uint32_t> gamma)
    : tw_(std::move(tw)), gamma_(std::move(gamma)) {
  require(gamma_.size() == tw_.m, "basis size must equal tower degree");
  const Field& E = *tw_.ext;
  const uint32_t p = E.p();
  const uint32_t e = tw_.base->e();
  n_ = e * tw_.m;
  // Coordinate matrix over the prime field: column (j,t) holds the prime
  // digits of gamma_j * z^t, z the embedded base generator root image.
  std::vector<uint32_t> M(size_t(n_) * n_, 0);
  for (uint32_t j = 0; j < tw_.m; ++j) {
    for (uint32_t t = 0; t < e; ++t) {
      uint32_t base_unit = 1;
      for (uint32_t i = 0; i < t; ++i) base_unit *= p;  // code of X^t in base
      uint32_t prod = E.mul(tw_.emb[base_unit], gamma_[j]);
      auto dig = to_digits(prod, p, n_);
      uint32_t col = j * e + t;
      for (uint32_t r = 0; r < n_; ++r) M[size_t(r) * n_ + col] = dig[r];
    }
  }
  // Invert M over F_p (Gauss-Jordan).
  std::vector<uint32_t> A = M;
  std::vector<uint32_t> I(size_t(n_) * n_, 0);
  for (uint32_t i = 0; i < n_; ++i) I[size_t(i) * n_ + i] = 1;
  auto inv_p = [&](uint32_t a) {
    uint32_t r = 1;
    uint32_t b = a;
    uint32_t n = p - 2;
    while (n) {
      if (n & 1) r = uint32_t(uint64_t(r) * b % p);
      b = uint32_t(uint64_t(b) * b % p);
      n >>= 1;
    }
    return r;
  };
  for (uint32_t col = 0; col < n_; ++col) {
    uint32_t piv = n_;
    for (uint32_t r = col; r < n_; ++r)
      if (A[size_t(r) * n_ + col]) {
        piv = r;
        break;
      }
    require(piv != n_, "gamma is not a basis over the base field");
    if (piv != col) {
      for (uint32_t c = 0; c < n_; ++c) {
        std::swap(A[size_t(piv) * n_ + c], A[size_t(col) * n_ + c]);
        std::swap(I[size_t(piv) * n_ + c], I[size_t(col) * n_ + c]);
      }
    }
    uint32_t s = inv_p(A[size_t(col) * n_ + col]);
    for (uint32_t c = 0; c < n_; ++c) {
      A[size_t(col) * n_ + c] = uint32_t(uint64_t(A[size_t(col) * n_ + c]) * s % p);
      I[size_t(col) * n_ + c] = uint32_t(uint64_t(I[size_t(col) * n_ + c]) * s % p);
    }
    for (uint32_t r = 0; r < n_; ++r) {
      if (r == col) continue;
      uint32_t c0 = A[size_t(r) * n_ + col];
      if (!c0) continue;
      for (uint32_t c = 0; c < n_; ++c) {
        A[size_t(r) * n_ + c] = uint32_t(
            (A[size_t(r) * n_ + c] + uint64_t(p - c0) * A[size_t(col) * n_ + c]) % p);
        I[size_t(r) * n_ + c] = uint32_t(
            (I[size_t(r) * n_ + c] + uint64_t(p - c0) * I[size_t(col) * n_ + c]) % p);
      }
    }
  }
  minv_ = std::move(I);
}

std::vector<uint32_t> SubfieldBasis::coords(uint32_t z) const {
  const uint32_t p = tw_.ext->p();
  const uint32_t e = tw_.base->e();
  auto y = to_digits(z, p, n_);
  std::vector<uint32_t> xi(n_, 0);
  for (uint32_t r = 0; r < n_; ++r) {
    uint64_t acc = 0;
    for (uint32_t c = 0; c < n_; ++c) acc += uint64_t(minv_[size_t(r) * n_ + c]) * y[c];
    xi[r] = uint32_t(acc % p);
  }
  std::vector<uint32_t> out(tw_.m, 0);
  for (uint32_t j = 0; j < tw_.m; ++j) {
    std::vector<uint32_t> dig(xi.begin() + size_t(j) * e, xi.begin() + size_t(j + 1) * e);
    out[j] = from_digits(dig, p);
  }
  return out;
}

uint32_t SubfieldBasis::assemble(const std::vector<uint32_t>& xs) const {
  require(xs.size() == tw_.m, "coordinate vector has wrong length");
  const Field& E = *tw_.ext;
  uint32_t acc = 0;
  for (uint32_t j = 0; j < tw_.m; ++j)
    acc = E.add(acc, E.mul(tw_.emb[xs[j]], gamma_[j]));
  return acc;
}

SubfieldBasis power_basis(const Tower& tw) {
  std::vector<uint32_t> gamma(tw.m);
  uint32_t g = tw.ext->generator();
  for (uint32_t j = 0; j < tw.m; ++j) gamma[j] = tw.ext->pow(g, j);
  return SubfieldBasis(tw, gamma);
}

uint32_t minpoly_degree(const Tower& tw, uint32_t z) {
  return uint32_t(minimal_polynomial(tw, z).size()) - 1;
}

Poly minimal_polynomial(const Tower& tw, uint32_t z) {
  const Field& B = *tw.base;
  SubfieldBasis pb = power_basis(tw);
  // Incremental echelon over the base field on coordinate rows of z^i,
  // tracking the combination that produced each reduced row.
  std::vector<std::vector<uint32_t>> red;    // reduced rows, length m
  std::vector<std::vector<uint32_t>> comb;   // combinations over powers of z
  std::vector<uint32_t> pivots;
  uint32_t zi = 1;
  for (uint32_t deg = 0; deg <= tw.m; ++deg) {
    std::vector<uint32_t> row = pb.coords(zi);
    std::vector<uint32_t> cb(deg + 1, 0);
    cb[deg] = 1;
    for (size_t r = 0; r < red.size(); ++r) {
      uint32_t c = row[pivots[r]];
      if (!c) continue;
      uint32_t f = B.div(c, red[r][pivots[r]]);
      for (uint32_t j = 0; j < tw.m; ++j)
        row[j] = B.sub(row[j], B.mul(f, red[r][j]));
      for (size_t j = 0; j < comb[r].size(); ++j)
        cb[j] = B.sub(cb[j], B.mul(f, comb[r][j]));
    }
    uint32_t piv = tw.m;
    for (uint32_t j = 0; j < tw.m; ++j)
      if (row[j]) {
        piv = j;
        break;
      }
    if (piv == tw.m) return cb;  // monic by construction
    red.push_back(std::move(row));
    comb.push_back(std::move(cb));
    pivots.push_back(piv);
    zi = tw.ext->mul(zi, z);
  }
  throw InternalError("minimal polynomial exceeds tower degree");
}

linalg::Mat subfield_expand(const SubfieldBasis& B,
                            const std::vector<uint32_t>& v) {
  linalg::Mat out(uint32_t(v.size()), B.m());
  for (uint32_t i = 0; i < out.rows; ++i) {
    auto c = B.coords(v[i]);
    for (uint32_t j = 0; j < out.cols; ++j) out.at(i, j) = c[j];
  }
  return out;
}

}  // namespace rkt::gf
