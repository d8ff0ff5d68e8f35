#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rktensor/common.hpp"
#include "rktensor/mat.hpp"

namespace rkt::gf {

// Hard cap on field size p^e.
inline constexpr uint64_t kFieldCap = 1u << 20;
// Add table kept only for small fields; larger odd-characteristic fields add
// digit by digit, characteristic 2 XORs.
inline constexpr uint64_t kAddTableCap = 1u << 10;

// Polynomial over a field: coefficient codes c0..cd, low degree first,
// trimmed (no trailing zeros; the zero polynomial is the empty vector).
using Poly = std::vector<uint32_t>;

Poly poly_trim(Poly f);
int poly_deg(const Poly& f);  // -1 for the zero polynomial

// Finite field F_{p^e}. An element is an integer code sum_i c_i p^i with
// 0 <= c_i < p, encoding the residue class sum_i c_i X^i modulo the field
// modulus. Code 0 is zero, code 1 is one; for prime fields the code is the
// residue itself.
class Field {
public:
  // Validates p prime, p^e <= kFieldCap, modulus monic irreducible of
  // degree e over F_p. Use make_field for the canonical modulus.
  Field(uint32_t p, uint32_t e, Poly modulus);

  uint32_t p() const { return p_; }
  uint32_t e() const { return e_; }
  uint32_t q() const { return q_; }
  const Poly& modulus() const { return modulus_; }
  // Smallest element code (in 0..q-1 order) generating the multiplicative
  // group.
  uint32_t generator() const { return generator_; }

  uint32_t add(uint32_t a, uint32_t b) const;
  uint32_t sub(uint32_t a, uint32_t b) const;
  uint32_t neg(uint32_t a) const;
  uint32_t mul(uint32_t a, uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    uint32_t la = log_[a] + log_[b];
    return exp_[la];
  }
  uint32_t inv(uint32_t a) const;
  uint32_t div(uint32_t a, uint32_t b) const;
  // pow(0,0) = 1; negative exponents invert (error on 0).
  uint32_t pow(uint32_t a, int64_t n) const;

  bool same(const Field& o) const {
    return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
  }

private:
  uint32_t mul_slow(uint32_t a, uint32_t b) const;  // table-free, build time

  uint32_t p_, e_, q_;
  Poly modulus_;
  uint32_t generator_ = 0;
  std::vector<uint32_t> log_;   // log_[a] for a != 0; log_[0] unused
  std::vector<uint32_t> exp_;   // size 2(q-1), wraps
  std::vector<uint32_t> add_;   // q*q table when q <= kAddTableCap and p odd
  std::vector<uint32_t> neg_;   // size q when p odd
};

using FieldPtr = std::shared_ptr<const Field>;

// Canonical field: modulus is the lexicographically smallest monic
// irreducible of degree e (coefficient tuple (c0..c_{e-1}) as a base-p
// number; for e = 1 this is X). Cached and immutable.
FieldPtr make_field(uint32_t p, uint32_t e);
// Same validation, caller-chosen modulus (deserialization path).
FieldPtr make_field_with_modulus(uint32_t p, uint32_t e, Poly modulus);

// Polynomial arithmetic over F.
Poly poly_add(const Field& F, const Poly& f, const Poly& g);
Poly poly_sub(const Field& F, const Poly& f, const Poly& g);
Poly poly_mul(const Field& F, const Poly& f, const Poly& g);
Poly poly_mod(const Field& F, Poly f, const Poly& g);
Poly poly_gcd(const Field& F, Poly f, Poly g);  // monic or zero
uint32_t poly_eval(const Field& F, const Poly& f, uint32_t x);
Poly poly_make_monic(const Field& F, Poly f);

// Deterministic irreducibility decision (Rabin test: x^{q^k} = x mod f and
// gcd(x^{q^{k/r}} - x, f) = 1 for prime r | k).
bool is_irreducible(const Field& F, const Poly& f);

// Seeded random search for a monic irreducible of degree k: draws coefficient
// tuples from mt19937_64(seed) until the Rabin test accepts. Deterministic in
// (field, k, seed).
Poly find_irreducible(const Field& F, uint32_t k, uint64_t seed);

std::string poly_to_string(const Field& F, const Poly& f);

// Extension tower F_{q^m} over F_q, both within the size cap. The extension
// field is the canonical field of matching size; the embedding maps the base
// field onto the subfield fixed by x -> x^{q}. em[] is indexed by base code.
struct Tower {
  FieldPtr base;
  FieldPtr ext;
  uint32_t m = 1;
  uint32_t root = 0;  // smallest root of base modulus inside ext
  std::vector<uint32_t> emb;
};

Tower make_tower(const FieldPtr& base, uint32_t m);
uint32_t minpoly_degree(const Tower& tw, uint32_t z);
// Monic minimal polynomial of z over the base field.
Poly minimal_polynomial(const Tower& tw, uint32_t z);

// Ordered basis of the extension over the base, with coordinate solver.
class SubfieldBasis {
public:
  SubfieldBasis(Tower tw, std::vector<uint32_t> gamma);  // validates basis

  const Tower& tower() const { return tw_; }
  const std::vector<uint32_t>& gamma() const { return gamma_; }
  uint32_t m() const { return uint32_t(gamma_.size()); }

  // Coordinates of an extension element in this basis (length m, base codes).
  std::vector<uint32_t> coords(uint32_t z) const;
  uint32_t assemble(const std::vector<uint32_t>& xs) const;

private:
  Tower tw_;
  std::vector<uint32_t> gamma_;
  uint32_t n_;                  // e*m, dimension over the prime field
  std::vector<uint32_t> minv_;  // inverse coordinate matrix over F_p
};

// 1, g, g^2, ..., g^{m-1} for the canonical generator g of the extension.
SubfieldBasis power_basis(const Tower& tw);

// Row i = coordinates of v[i]: an n-vector over the extension becomes an
// n x m matrix over the base.
linalg::Mat subfield_expand(const SubfieldBasis& B,
                            const std::vector<uint32_t>& v);

}  // namespace rkt::gf
