#include "rktensor/trank.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <iterator>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "rktensor/linalg.hpp"

namespace rkt::trank {
namespace {

using gf::Field;
using linalg::Mat;
using rankcode::DistResult;
using tensor::SimpleSum;
using tensor::Tensor3;

// Hard feasibility and memory rails. The engine refuses instances whose
// rank-one class list cannot be held, and converts frontier blowups into
// honest budget stops instead of swapping the machine to death.
constexpr uint64_t kImageCap = uint64_t(1) << 21;
constexpr uint64_t kFrontierCap = 20u * 1000 * 1000;  // stored nodes per level
constexpr size_t kBatchElems = size_t(1) << 22;
constexpr uint64_t kDistCap = uint64_t(1) << 22;
constexpr uint64_t kSmallQuotient = 20000;  // codim_enum auto threshold

uint64_t field_order(const Field& F) { return F.q(); }

struct Deadline {
  std::chrono::steady_clock::time_point start;
  uint64_t limit_ms = 0;
  Deadline() : start(std::chrono::steady_clock::now()) {}
  bool expired() const {
    if (!limit_ms) return false;
    auto el = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    return uint64_t(el) >= limit_ms;
  }
};

bool tensor_equal(const Tensor3& a, const Tensor3& b) {
  return a.n1 == b.n1 && a.n2 == b.n2 && a.n3 == b.n3 && a.a == b.a;
}

// Incremental row space over a field; rows are kept reduced against earlier
// pivots, so membership is "reduces to zero". Append-only, which makes
// truncation a valid rollback.
struct RowSpace {
  const Field* F = nullptr;
  uint32_t width = 0;
  std::vector<std::vector<uint32_t>> rows;
  std::vector<uint32_t> pivs;

  uint32_t reduce(std::vector<uint32_t>& v) const {
    for (size_t t = 0; t < rows.size(); ++t) {
      uint32_t c = v[pivs[t]];
      if (!c) continue;
      for (uint32_t j = 0; j < width; ++j)
        v[j] = F->sub(v[j], F->mul(c, rows[t][j]));
    }
    for (uint32_t j = 0; j < width; ++j)
      if (v[j]) return j;
    return width;
  }
  bool add(std::vector<uint32_t> v) {
    uint32_t p = reduce(v);
    if (p == width) return false;
    uint32_t lead = F->inv(v[p]);
    for (uint32_t j = p; j < width; ++j) v[j] = F->mul(v[j], lead);
    rows.push_back(std::move(v));
    pivs.push_back(p);
    return true;
  }
  uint32_t dim() const { return uint32_t(rows.size()); }
  void truncate(size_t sz) {
    rows.resize(sz);
    pivs.resize(sz);
  }
};

void factor_rank_one(const Field& F, const Mat& M, std::vector<uint32_t>* v,
                     std::vector<uint32_t>* w) {
  uint32_t r0 = 0, c0 = 0;
  bool found = false;
  for (uint32_t i = 0; i < M.rows && !found; ++i)
    for (uint32_t j = 0; j < M.cols && !found; ++j)
      if (M.at(i, j)) {
        r0 = i;
        c0 = j;
        found = true;
      }
  internal_check(found, "rank-one factorization of a zero matrix");
  uint32_t piv = M.at(r0, c0);
  v->assign(M.rows, 0);
  w->assign(M.cols, 0);
  for (uint32_t i = 0; i < M.rows; ++i) (*v)[i] = F.div(M.at(i, c0), piv);
  for (uint32_t j = 0; j < M.cols; ++j) (*w)[j] = M.at(r0, j);
}

// Independent rank ones whose span contains the code become a decomposition
// of the generator tensor: the coefficients of each generator over them are
// the u components. The coordinate identity is re-checked on every build.
SimpleSum assemble_sum(const MatrixCode& C, const std::vector<Mat>& terms) {
  const Field& F = *C.field;
  uint32_t k = C.k(), N = C.n * C.m;
  uint32_t L = uint32_t(terms.size());
  Mat A(L, N);
  for (uint32_t t = 0; t < L; ++t)
    for (uint32_t j = 0; j < N; ++j) A.at(t, j) = terms[t].a[j];
  auto tr = linalg::rref_with_transform(F, A);
  internal_check(tr.rank == L, "spanning rank ones must be independent");
  SimpleSum S;
  S.n1 = k;
  S.n2 = C.n;
  S.n3 = C.m;
  S.triples.resize(L);
  for (uint32_t t = 0; t < L; ++t) {
    S.triples[t].u.assign(k, 0);
    factor_rank_one(F, terms[t], &S.triples[t].v, &S.triples[t].w);
  }
  for (uint32_t i = 0; i < k; ++i) {
    std::vector<uint32_t> b(N);
    for (uint32_t j = 0; j < N; ++j) b[j] = C.gen.at(i, j);
    std::vector<uint32_t> coef;
    bool ok = linalg::express_in_rows(F, tr, b, &coef);
    internal_check(ok, "generator escapes the spanning rank ones");
    for (uint32_t t = 0; t < L; ++t) S.triples[t].u[i] = coef[t];
  }
  tensor::validate(F, S);
  internal_check(tensor_equal(tensor::to_coordinates(F, S),
                              rankcode::generator_tensor(C)),
                 "decomposition does not rebuild the generator tensor");
  return S;
}

std::vector<Mat> factor_pool(const MatrixCode& C, bool col_side) {
  const Field& F = *C.field;
  std::vector<Mat> terms;
  for (uint32_t i = 0; i < C.k(); ++i) {
    Mat B = C.basis_matrix(i);
    if (col_side) B = linalg::transpose(B);
    auto tr = linalg::rref_with_transform(F, B);
    Mat Tinv = linalg::inverse(F, tr.T);
    for (uint32_t j = 0; j < tr.rank; ++j) {
      std::vector<uint32_t> v(B.rows), w(B.cols);
      for (uint32_t a = 0; a < B.rows; ++a) v[a] = Tinv.at(a, j);
      for (uint32_t b = 0; b < B.cols; ++b) w[b] = tr.R.at(j, b);
      Mat term = linalg::outer(F, v, w);
      if (col_side) term = linalg::transpose(term);
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

// Keep an independent subset, then drop members until every survivor is
// needed for the span to cover the code.
std::vector<Mat> prune_pool(const MatrixCode& C, const std::vector<Mat>& terms) {
  const Field& F = *C.field;
  uint32_t N = C.n * C.m;
  RowSpace rs{&F, N, {}, {}};
  std::vector<Mat> kept;
  for (const Mat& t : terms)
    if (rs.add(t.a)) kept.push_back(t);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < kept.size(); ++i) {
      Mat st(uint32_t(kept.size() - 1 + C.k()), N);
      uint32_t r = 0;
      for (size_t t = 0; t < kept.size(); ++t) {
        if (t == i) continue;
        for (uint32_t j = 0; j < N; ++j) st.at(r, j) = kept[t].a[j];
        ++r;
      }
      for (uint32_t g = 0; g < C.k(); ++g, ++r)
        for (uint32_t j = 0; j < N; ++j) st.at(r, j) = C.gen.at(g, j);
      if (linalg::rank(F, st) == kept.size() - 1) {
        kept.erase(kept.begin() + i);
        changed = true;
        break;
      }
    }
  }
  return kept;
}

// Constructive upper bound: factor the generators on the row side and the
// column side, prune both pools, keep the shorter.
SimpleSum greedy_cover(const MatrixCode& C) {
  std::vector<Mat> a = prune_pool(C, factor_pool(C, false));
  std::vector<Mat> b = prune_pool(C, factor_pool(C, true));
  return assemble_sum(C, b.size() < a.size() ? b : a);
}

// ---------------------------------------------------------------------------
// Quotient bookkeeping: coordinates of ambient/code on the non-pivot
// positions of the canonical generator.

struct Quotient {
  const Field* F = nullptr;
  const Mat* gen = nullptr;
  uint32_t N = 0, k = 0, f = 0;
  std::vector<uint32_t> pivots, free_pos;

  std::vector<uint32_t> project(const std::vector<uint32_t>& v) const {
    std::vector<uint32_t> w = v;
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t c = w[pivots[i]];
      if (!c) continue;
      for (uint32_t t = 0; t < N; ++t)
        w[t] = F->sub(w[t], F->mul(c, gen->at(i, t)));
    }
    std::vector<uint32_t> out(f);
    for (uint32_t j = 0; j < f; ++j) out[j] = w[free_pos[j]];
    return out;
  }
};

Quotient make_quotient(const MatrixCode& C) {
  Quotient Q;
  Q.F = C.field.get();
  Q.gen = &C.gen;
  Q.N = C.n * C.m;
  Q.k = C.k();
  std::vector<char> ispiv(Q.N, 0);
  for (uint32_t r = 0; r < Q.k; ++r) {
    uint32_t c = 0;
    while (c < Q.N && !C.gen.at(r, c)) ++c;
    internal_check(c < Q.N, "generator with a zero row");
    Q.pivots.push_back(c);
    ispiv[c] = 1;
  }
  for (uint32_t c = 0; c < Q.N; ++c)
    if (!ispiv[c]) Q.free_pos.push_back(c);
  Q.f = Q.N - Q.k;
  return Q;
}

uint64_t rank_one_class_count(uint64_t q, uint32_t n, uint32_t m) {
  // (q^n - 1)(q^m - 1) / (q - 1)^2, clamped instead of overflowing
  auto geom = [&](uint32_t e) -> uint64_t {
    unsigned __int128 s = 0, p = 1;
    for (uint32_t i = 0; i < e; ++i) {
      s += p;
      if (s > (unsigned __int128)1 << 100) return uint64_t(1) << 62;
      p *= q;
    }
    return s > (unsigned __int128)(uint64_t(1) << 62) ? uint64_t(1) << 62
                                                      : uint64_t(s);
  };
  unsigned __int128 prod = (unsigned __int128)geom(n) * geom(m);
  return prod > (unsigned __int128)(uint64_t(1) << 62) ? uint64_t(1) << 62
                                                       : uint64_t(prod);
}

struct ImageSet {
  std::vector<Mat> mats;
  std::vector<std::vector<uint32_t>> proj;  // quotient coordinates
};

ImageSet make_images(const MatrixCode& C, const Quotient& Q) {
  const Field& F = *C.field;
  uint64_t count = rank_one_class_count(field_order(F), C.n, C.m);
  require(count <= kImageCap,
          "rank-one class count " + std::to_string(count) +
              " exceeds the search cap " + std::to_string(kImageCap));
  unsigned __int128 pw = 1;
  for (uint32_t i = 0; i < C.n + C.m; ++i) {
    pw *= field_order(F);
    if (pw > (unsigned __int128)(uint64_t(1) << 62)) break;
  }
  uint64_t enum_cap = pw > (unsigned __int128)(uint64_t(1) << 62)
                          ? uint64_t(1) << 62
                          : uint64_t(pw);
  ImageSet I;
  I.mats = linalg::enumerate_rank_one(F, C.n, C.m, enum_cap);
  I.proj.reserve(I.mats.size());
  for (const Mat& M : I.mats) I.proj.push_back(Q.project(M.a));
  return I;
}

// ---------------------------------------------------------------------------
// Downward cover heuristic over GF(2): start from the full quotient, which
// the rank ones always span, and repeatedly pass to a hyperplane that they
// still span together with the code. Any minimal cover sits at the bottom of
// such a chain, because enlarging it one direction at a time keeps every
// intermediate space spanned; a depth-first walk with a node cap therefore
// has a real chance of reaching the optimum, and whatever leaf it reaches is
// a valid constructive upper bound. Deterministic: children are ordered by
// surviving member count, then functional index.

struct DescentOut {
  uint32_t dim = ~uint32_t(0);        // code dim + leaf quotient dim
  std::vector<uint32_t> members;      // spanning image indices at the leaf
  uint64_t nodes = 0;
};

struct Descent {
  uint32_t kk = 0, ff = 0;
  const std::vector<uint64_t>* qv = nullptr;
  const std::vector<uint64_t>* av = nullptr;
  uint64_t node_cap = 4096;
  uint32_t floor_val = 0;  // proven lower bound, absolute stop
  DescentOut out;

  static bool parity(uint32_t x) { return __builtin_popcount(x) & 1; }

  bool span_reaches(const std::vector<uint32_t>& mem, uint32_t want,
                    std::vector<uint32_t>* pick) const {
    uint64_t by_lead[64] = {0};
    uint32_t got = 0;
    for (uint32_t i : mem) {
      uint64_t x = (*av)[i];
      while (x) {
        int b = 63 - __builtin_clzll(x);
        if (!by_lead[b]) break;
        x ^= by_lead[b];
      }
      if (!x) continue;
      by_lead[63 - __builtin_clzll(x)] = x;
      if (pick) pick->push_back(i);
      if (++got == want) return true;
    }
    return false;
  }

  void go(const std::vector<uint64_t>& rows, const std::vector<int>& pb,
          const std::vector<uint32_t>& mem) {
    uint32_t r = uint32_t(rows.size());
    if (++out.nodes > node_cap) return;
    if (kk + r < out.dim) {
      // every visited node is a proven cover already
      std::vector<uint32_t> pick;
      internal_check(span_reaches(mem, kk + r, &pick),
                     "descent node lost its spanning members");
      out.dim = kk + r;
      out.members = std::move(pick);
      if (out.dim <= floor_val) return;
    }
    if (r == 0) return;
    std::vector<uint32_t> co(mem.size(), 0);
    for (size_t i = 0; i < mem.size(); ++i) {
      uint64_t x = (*qv)[mem[i]];
      for (uint32_t t = 0; t < r; ++t)
        if ((x >> pb[t]) & 1) {
          x ^= rows[t];
          co[i] |= uint32_t(1) << t;
        }
      internal_check(x == 0, "carried member fell outside its subspace");
    }
    struct Cand {
      uint32_t c, keep;
    };
    std::vector<Cand> cands;
    for (uint32_t c = 1; c < (uint32_t(1) << r); ++c) {
      uint32_t keep = 0;
      for (uint32_t x : co) keep += !parity(c & x);
      if (keep >= kk + r - 1) cands.push_back({c, keep});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return a.keep != b.keep ? a.keep > b.keep : a.c < b.c;
    });
    if (cands.size() > 32) cands.resize(32);
    std::vector<uint64_t> crows(r - 1);
    std::vector<int> cpb(r - 1);
    std::vector<uint32_t> cmem;
    for (const Cand& cd : cands) {
      // lowest-pivot set row absorbs the functional, keeping the rest RREF
      uint32_t t0 = 0;
      for (uint32_t t = 0; t < r; ++t)
        if ((cd.c >> t) & 1) t0 = t;
      uint32_t w = 0;
      for (uint32_t t = 0; t < r; ++t) {
        if (t == t0) continue;
        crows[w] = (cd.c >> t) & 1 ? rows[t] ^ rows[t0] : rows[t];
        cpb[w] = pb[t];
        ++w;
      }
      cmem.clear();
      for (size_t i = 0; i < mem.size(); ++i)
        if (!parity(cd.c & co[i])) cmem.push_back(mem[i]);
      if (!span_reaches(cmem, kk + r - 1, nullptr)) continue;
      go(crows, cpb, cmem);
      if (out.dim <= floor_val || out.nodes > node_cap) return;
    }
  }
};

DescentOut descend_cover(const Quotient& Q, const ImageSet& I, uint32_t k,
                         uint32_t floor_val) {
  Descent D;
  D.kk = k;
  D.ff = Q.f;
  D.floor_val = floor_val;
  std::vector<uint64_t> qv(I.mats.size()), av(I.mats.size());
  for (size_t i = 0; i < I.mats.size(); ++i) {
    uint64_t q = 0, a = 0;
    for (uint32_t j = 0; j < Q.f; ++j)
      if (I.proj[i][j]) q |= uint64_t(1) << (Q.f - 1 - j);
    for (uint32_t t = 0; t < Q.N; ++t)
      if (I.mats[i].a[t]) a |= uint64_t(1) << t;
    qv[i] = q;
    av[i] = a;
  }
  D.qv = &qv;
  D.av = &av;
  std::vector<uint64_t> rows(Q.f);
  std::vector<int> pb(Q.f);
  std::vector<uint32_t> mem(I.mats.size());
  for (uint32_t t = 0; t < Q.f; ++t) {
    rows[t] = uint64_t(1) << (Q.f - 1 - t);
    pb[t] = int(Q.f - 1 - t);
  }
  for (uint32_t i = 0; i < mem.size(); ++i) mem[i] = i;
  D.go(rows, pb, mem);
  return D.out;
}

// ---------------------------------------------------------------------------
// Search plumbing shared by every strategy.

enum class Stop { exact, budget, above };

struct EngineOut {
  Stop stop = Stop::budget;
  uint32_t value = 0;              // meaningful when exact
  std::vector<uint32_t> members;   // image indices of the witness, when any
  bool used_greedy = false;        // exact via the constructive upper bound
  uint32_t ruled = 0;              // dimensions known witness-free
  uint32_t best_lower = 0;
  std::string note;
};

struct Ctx {
  const MatrixCode* C = nullptr;
  const Quotient* Q = nullptr;
  const ImageSet* I = nullptr;
  uint32_t k = 0, f = 0;
  uint32_t lower0 = 0, upper0 = 0;
  uint32_t stop_above = 0;  // 0 = unset
  uint32_t workers = 1;
  uint64_t node_budget = 0;
  Deadline dl;
  uint64_t nodes = 0;
};

struct LevelOutcome {
  bool witness = false;
  std::vector<uint32_t> members;
  bool budget_hit = false;
  bool built = false;        // frontier advanced to this level
  uint64_t level_nodes = 0;  // deterministic candidate count for the level
  std::string note;
};

// One schedule for every breadth-first kernel: dimensions below the lower
// bound are never tested, a dimension equal to the constructive upper bound
// is decided by that certificate without being generated, and a stop
// threshold turns into an early exit as soon as the bound passes it.
// Levels whose node sets are too large to store are scanned virtually from
// the last materialized frontier, as far as the kernel can reach.
template <class Kern>
EngineOut bfs_drive(Ctx& cx, Kern& ker) {
  EngineOut out;
  uint32_t lower = cx.lower0;
  const uint32_t upper = cx.upper0;
  if (cx.k >= lower) {
    cx.nodes += 1;
    std::vector<uint32_t> mem = ker.test_root();
    if (!mem.empty()) {
      out.stop = Stop::exact;
      out.value = cx.k;
      out.members = std::move(mem);
      out.best_lower = cx.k;
      return out;
    }
  }
  out.ruled = 1;
  lower = std::max(lower, cx.k + 1);
  uint32_t base = 0;  // level of the frontier the kernel holds
  for (uint32_t L = 1; L <= cx.f; ++L) {
    uint32_t target = cx.k + L;
    if (cx.stop_above && target > cx.stop_above) {
      out.stop = Stop::above;
      out.best_lower = lower;
      return out;
    }
    if (target == upper) {
      out.stop = Stop::exact;
      out.value = upper;
      out.used_greedy = true;
      out.best_lower = upper;
      return out;
    }
    uint32_t e = L - base;
    if (e > ker.max_extend()) {
      out.stop = Stop::budget;
      out.best_lower = lower;
      out.note = "frontier memory cap leaves dimension " + std::to_string(L) +
                 " out of reach";
      return out;
    }
    bool need_test = target >= lower;
    uint32_t next_t = target + 1;
    bool deeper = next_t < upper && (!cx.stop_above || next_t <= cx.stop_above) &&
                  L < cx.f;
    bool try_build = deeper && e == 1;
    if (need_test || try_build) {
      LevelOutcome lo = ker.process_level(L, e, need_test, try_build, cx);
      cx.nodes += lo.level_nodes;
      if (lo.budget_hit) {
        out.stop = Stop::budget;
        out.best_lower = lower;
        out.note = lo.note;
        return out;
      }
      if (lo.witness) {
        out.stop = Stop::exact;
        out.value = target;
        out.members = std::move(lo.members);
        out.best_lower = target;
        return out;
      }
      if (lo.built) base = L;
    }
    out.ruled = L + 1;
    lower = std::max(lower, target + 1);
    if (!deeper) break;
  }
  uint32_t t2 = cx.k + out.ruled;
  if (cx.stop_above && t2 > cx.stop_above) {
    out.stop = Stop::above;
    out.best_lower = lower;
    return out;
  }
  internal_check(t2 == upper, "level walk ended away from both bounds");
  out.stop = Stop::exact;
  out.value = upper;
  out.used_greedy = true;
  out.best_lower = upper;
  return out;
}

// ---------------------------------------------------------------------------
// Packed kernel for GF(2). Quotient vectors are f-bit words (coordinate j at
// bit f-1-j, so word order is lexicographic vector order), a node is its
// RREF basis packed row 0 first into a 128-bit key, and per-parent counting
// tables make the membership filter O(1) per child.

using Key = unsigned __int128;

struct KeyHash {
  size_t operator()(Key x) const {
    uint64_t lo = uint64_t(x), hi = uint64_t(x >> 64);
    uint64_t h = (lo ^ (hi * 0x9e3779b97f4a7c15ULL)) + (hi << 1);
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return size_t(h);
  }
};

std::vector<Key> merge_unique(const std::vector<Key>& a,
                              const std::vector<Key>& b) {
  std::vector<Key> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

std::vector<Key> merge_all(std::vector<std::vector<Key>> runs) {
  if (runs.empty()) return {};
  while (runs.size() > 1) {
    std::vector<std::vector<Key>> next;
    for (size_t i = 0; i + 1 < runs.size(); i += 2)
      next.push_back(merge_unique(runs[i], runs[i + 1]));
    if (runs.size() & 1) next.push_back(std::move(runs.back()));
    runs = std::move(next);
  }
  return std::move(runs[0]);
}

struct KernGf2 {
  uint32_t kk = 0, ff = 0, nb = 0;  // nb = ambient bit width
  std::vector<uint64_t> qv, av;
  std::vector<Key> frontier;  // keys of the last materialized level
  uint32_t cur_level = 0;

  void init(const Ctx& cx) {
    kk = cx.k;
    ff = cx.f;
    nb = cx.Q->N;
    size_t ni = cx.I->mats.size();
    qv.resize(ni);
    av.resize(ni);
    for (size_t i = 0; i < ni; ++i) {
      uint64_t q = 0, a = 0;
      for (uint32_t j = 0; j < ff; ++j)
        if (cx.I->proj[i][j]) q |= uint64_t(1) << (ff - 1 - j);
      for (uint32_t t = 0; t < nb; ++t)
        if (cx.I->mats[i].a[t]) a |= uint64_t(1) << t;
      qv[i] = q;
      av[i] = a;
    }
    frontier = {Key(0)};
    cur_level = 0;
  }

  static void decode(Key key, uint32_t rc, uint32_t f, uint64_t* rows,
                     int* pb) {
    uint64_t mask = f == 64 ? ~uint64_t(0) : ((uint64_t(1) << f) - 1);
    for (int t = int(rc) - 1; t >= 0; --t) {
      rows[t] = uint64_t(key) & mask;
      key >>= f;
      pb[t] = 63 - __builtin_clzll(rows[t]);
    }
  }

  uint32_t max_extend() const { return 2; }

  // Insert the reduced vector v into the parent basis: eliminate its pivot
  // above, splice it in pivot order, repack. Parent pivots are untouched
  // because v is already zero there.
  Key canon_child(const uint64_t* rows, const int* pb, uint32_t rc,
                  uint64_t v) const {
    int p = 63 - __builtin_clzll(v);
    Key key = 0;
    uint32_t t = 0;
    for (; t < rc && pb[t] > p; ++t)
      key = (key << ff) | ((rows[t] >> p) & 1 ? rows[t] ^ v : rows[t]);
    key = (key << ff) | v;
    for (; t < rc; ++t)
      key = (key << ff) | ((rows[t] >> p) & 1 ? rows[t] ^ v : rows[t]);
    return key;
  }

  static void insert_row(uint64_t* nr, int* np, uint32_t& n, uint64_t v) {
    int p = 63 - __builtin_clzll(v);
    for (uint32_t t = 0; t < n; ++t)
      if ((nr[t] >> p) & 1) nr[t] ^= v;
    uint32_t pos = 0;
    while (pos < n && np[pos] > p) ++pos;
    for (uint32_t t = n; t > pos; --t) {
      nr[t] = nr[t - 1];
      np[t] = np[t - 1];
    }
    nr[pos] = v;
    np[pos] = p;
    ++n;
  }

  Key canon_child2(const uint64_t* rows, const int* pb, uint32_t rc,
                   uint64_t a, uint64_t b) const {
    uint64_t nr[22];
    int np[22];
    uint32_t n = 0;
    for (uint32_t t = 0; t < rc; ++t) {
      nr[n] = rows[t];
      np[n] = pb[t];
      ++n;
    }
    insert_row(nr, np, n, a);
    uint64_t br = (b >> (63 - __builtin_clzll(a))) & 1 ? b ^ a : b;
    insert_row(nr, np, n, br);
    Key key = 0;
    for (uint32_t t = 0; t < n; ++t) key = (key << ff) | nr[t];
    return key;
  }

  // Independent in-code images must span the code itself.
  std::vector<uint32_t> test_root() const {
    std::vector<uint32_t> mem;
    uint64_t by_lead[64] = {0};
    uint32_t got = 0;
    for (size_t i = 0; i < qv.size(); ++i) {
      if (qv[i]) continue;
      uint64_t x = av[i];
      while (x) {
        int b = 63 - __builtin_clzll(x);
        if (!by_lead[b]) break;
        x ^= by_lead[b];
      }
      if (!x) continue;
      by_lead[63 - __builtin_clzll(x)] = x;
      mem.push_back(uint32_t(i));
      if (++got == kk) return mem;
    }
    return {};
  }

  bool rank_reaches(uint64_t v, const std::vector<uint64_t>& red,
                    uint32_t target) const {
    uint64_t by_lead[64] = {0};
    uint32_t got = 0;
    for (size_t i = 0; i < red.size(); ++i) {
      if (red[i] != 0 && red[i] != v) continue;
      uint64_t x = av[i];
      while (x) {
        int b = 63 - __builtin_clzll(x);
        if (!by_lead[b]) break;
        x ^= by_lead[b];
      }
      if (!x) continue;
      by_lead[63 - __builtin_clzll(x)] = x;
      if (++got == target) return true;
    }
    return false;
  }

  bool rank_reaches2(uint64_t a, uint64_t b, const std::vector<uint64_t>& red,
                     uint32_t target) const {
    uint64_t c = a ^ b, by_lead[64] = {0};
    uint32_t got = 0;
    for (size_t i = 0; i < red.size(); ++i) {
      uint64_t r = red[i];
      if (r != 0 && r != a && r != b && r != c) continue;
      uint64_t x = av[i];
      while (x) {
        int bit = 63 - __builtin_clzll(x);
        if (!by_lead[bit]) break;
        x ^= by_lead[bit];
      }
      if (!x) continue;
      by_lead[63 - __builtin_clzll(x)] = x;
      if (++got == target) return true;
    }
    return false;
  }

  std::vector<uint32_t> members_of(Key key, uint32_t L, uint32_t target) const {
    uint64_t rows[22];
    int pb[22];
    decode(key, L, ff, rows, pb);
    std::vector<uint32_t> mem;
    uint64_t by_lead[64] = {0};
    for (size_t i = 0; i < qv.size(); ++i) {
      uint64_t x = qv[i];
      for (uint32_t t = 0; t < L; ++t)
        if ((x >> pb[t]) & 1) x ^= rows[t];
      if (x) continue;
      uint64_t y = av[i];
      while (y) {
        int b = 63 - __builtin_clzll(y);
        if (!by_lead[b]) break;
        y ^= by_lead[b];
      }
      if (!y) continue;
      by_lead[63 - __builtin_clzll(y)] = y;
      mem.push_back(uint32_t(i));
      if (mem.size() == target) return mem;
    }
    internal_check(false, "witness lost its spanning members");
    return {};
  }

  // Scan the children e steps past the stored frontier. The per-parent count
  // table turns subspace membership totals into O(1) lookups, so candidate
  // nodes are rank-tested only when enough rank ones land inside them. A
  // frontier build that outgrows the cap is abandoned mid-level and later
  // levels fall back to wider extension scans; the candidate count of a level
  // cut short by such an abandoned build is reported as zero so that exact
  // results stay independent of worker scheduling.
  LevelOutcome process_level(uint32_t L, uint32_t e, bool need_test,
                             bool try_build, Ctx& cx) {
    LevelOutcome lo;
    if (uint64_t(L) * ff > 127) {
      lo.budget_hit = true;
      lo.note = "packed node key overflows at dimension " + std::to_string(L);
      return lo;
    }
    const uint32_t target = kk + L;
    const uint32_t rc = L - e;
    const size_t P = frontier.size();
    uint32_t nw = uint32_t(std::min<size_t>(
        std::max<size_t>(P / 1024, 1), std::min<uint32_t>(cx.workers, 8)));
    std::mutex mu;
    std::vector<std::vector<std::vector<Key>>> worker_runs(nw);
    std::vector<uint64_t> worker_nodes(nw, 0);
    std::vector<Key> wit;
    std::atomic<uint64_t> approx{0};  // budget predicate only
    std::atomic<uint64_t> run_elems{0};
    std::atomic<bool> building{try_build};
    std::atomic<bool> crossed{false};
    std::string cross_note;

    auto work = [&](uint32_t wid) {
      std::vector<uint32_t> stamp(size_t(1) << ff, ~uint32_t(0));
      std::vector<uint32_t> cnt(size_t(1) << ff, 0);
      uint32_t epoch = 0;
      std::vector<uint64_t> red(qv.size());
      std::vector<uint32_t> vals, vals3;
      vals.reserve(qv.size());
      vals3.reserve(qv.size());
      std::vector<Key> batch;
      std::unordered_set<Key, KeyHash> tested;
      std::vector<Key> mywit;
      std::vector<std::vector<Key>> myruns;
      uint64_t mynodes = 0, fed = 0;
      auto feed_checks = [&]() {
        approx.fetch_add(mynodes - fed);
        fed = mynodes;
        if (cx.nodes + approx.load() > cx.node_budget) {
          std::lock_guard<std::mutex> g(mu);
          cross_note = "node budget exhausted at dimension " +
                       std::to_string(L);
          crossed.store(true);
        } else if (cx.dl.expired()) {
          std::lock_guard<std::mutex> g(mu);
          cross_note = "time budget exhausted at dimension " +
                       std::to_string(L);
          crossed.store(true);
        }
      };
      auto drop_runs = [&]() {
        uint64_t held = 0;
        for (auto& r : myruns) held += r.size();
        run_elems.fetch_sub(held);
        myruns.clear();
        batch.clear();
      };
      auto flush = [&]() {
        if (!building.load(std::memory_order_relaxed)) {
          drop_runs();
          return;
        }
        std::sort(batch.begin(), batch.end());
        batch.erase(std::unique(batch.begin(), batch.end()), batch.end());
        run_elems.fetch_add(batch.size());
        myruns.push_back(std::move(batch));
        batch = {};
        if (myruns.size() >= 8) {
          uint64_t before = 0;
          for (auto& r : myruns) before += r.size();
          std::vector<Key> m = merge_all(std::move(myruns));
          myruns.clear();
          run_elems.fetch_sub(before - m.size());
          myruns.push_back(std::move(m));
        }
        if (run_elems.load() > kFrontierCap) {
          building.store(false);
          drop_runs();
        }
      };
      uint64_t rows[22];
      int pb[22];
      uint64_t it = 0;
      for (size_t p = wid; p < P; p += nw) {
        if (crossed.load(std::memory_order_relaxed)) break;
        bool bnow = building.load(std::memory_order_relaxed);
        if (!need_test && !bnow) break;
        decode(frontier[p], rc, ff, rows, pb);
        ++epoch;
        vals.clear();
        uint32_t zc = 0;
        for (size_t i = 0; i < qv.size(); ++i) {
          uint64_t x = qv[i];
          for (uint32_t t = 0; t < rc; ++t)
            x ^= rows[t] & (~((x >> pb[t]) & 1) + 1);
          red[i] = x;
          if (!x) {
            ++zc;
            continue;
          }
          if (stamp[x] != epoch) {
            stamp[x] = epoch;
            cnt[x] = 1;
            vals.push_back(uint32_t(x));
          } else {
            ++cnt[x];
          }
        }
        if (e == 1) {
          mynodes += vals.size();
          for (uint32_t v : vals) {
            Key key = 0;
            bool have = false;
            if (need_test && zc + cnt[v] >= target) {
              key = canon_child(rows, pb, rc, v);
              have = true;
              if (tested.insert(key).second && rank_reaches(v, red, target))
                mywit.push_back(key);
            }
            if (bnow) {
              if (!have) key = canon_child(rows, pb, rc, v);
              batch.push_back(key);
              if (batch.size() >= kBatchElems) {
                flush();
                bnow = building.load(std::memory_order_relaxed);
              }
            }
          }
        } else {
          // A two-step child holds three cosets beyond the parent, and their
          // member counts must add up to the target. The three largest
          // counts bound every child, which rules most parents out in one
          // pass. A surviving child is reachable through its heaviest
          // direction as anchor and its second direction as partner, so
          // anchors carry at least a third of the missing members and
          // partners at least half of what the anchor leaves. The canonical
          // key is pair-independent, deduplicating repeated visits.
          int64_t T = int64_t(target) - zc;
          uint32_t c1 = 0, c2 = 0, c3 = 0;
          for (uint32_t v : vals) {
            uint32_t c = cnt[v];
            if (c > c1) {
              c3 = c2;
              c2 = c1;
              c1 = c;
            } else if (c > c2) {
              c3 = c2;
              c2 = c;
            } else if (c > c3) {
              c3 = c;
            }
          }
          if (int64_t(c1) + c2 + c3 >= T) {
            uint32_t thr = T <= 0 ? 0 : uint32_t((T + 2) / 3);
            vals3 = vals;
            std::sort(vals3.begin(), vals3.end(),
                      [&](uint32_t lhs, uint32_t rhs) {
                        return cnt[lhs] != cnt[rhs] ? cnt[lhs] > cnt[rhs]
                                                    : lhs < rhs;
                      });
            for (size_t ia = 0; ia < vals3.size(); ++ia) {
              uint64_t a = vals3[ia], ca = cnt[vals3[ia]];
              if (ca < thr) break;
              int64_t rest = T - int64_t(ca);
              uint64_t hb = rest <= 0 ? 1 : uint64_t((rest + 1) / 2);
              for (size_t ib = 0; ib < vals3.size(); ++ib) {
                uint64_t b = vals3[ib];
                if (cnt[vals3[ib]] < hb) break;
                if (b == a) continue;
                ++mynodes;
                uint64_t x = a ^ b;
                uint64_t xc = stamp[x] == epoch ? cnt[x] : 0;
                if (int64_t(ca + cnt[vals3[ib]] + xc) >= T) {
                  Key key = canon_child2(rows, pb, rc, a, b);
                  if (tested.insert(key).second &&
                      rank_reaches2(a, b, red, target))
                    mywit.push_back(key);
                }
              }
            }
          }
        }
        if ((++it & 63) == 0) feed_checks();
      }
      if (!batch.empty()) flush();
      feed_checks();
      std::lock_guard<std::mutex> g(mu);
      worker_runs[wid] = std::move(myruns);
      worker_nodes[wid] = mynodes;
      wit.insert(wit.end(), mywit.begin(), mywit.end());
    };

    if (nw == 1) {
      work(0);
    } else {
      std::vector<std::thread> th;
      for (uint32_t w = 1; w < nw; ++w) th.emplace_back(work, w);
      work(0);
      for (auto& t : th) t.join();
    }
    bool aborted_build = try_build && !building.load();
    uint64_t total_nodes = 0;
    for (uint64_t n : worker_nodes) total_nodes += n;
    lo.level_nodes =
        (aborted_build && !need_test && !crossed.load()) ? 0 : total_nodes;
    if (crossed.load()) {
      lo.budget_hit = true;
      lo.note = cross_note;
      return lo;
    }
    if (!wit.empty()) {
      Key best = *std::min_element(wit.begin(), wit.end());
      lo.witness = true;
      lo.members = members_of(best, L, target);
      return lo;
    }
    if (try_build && building.load()) {
      std::vector<std::vector<Key>> runs;
      for (auto& wr : worker_runs)
        for (auto& r : wr) runs.push_back(std::move(r));
      frontier = merge_all(std::move(runs));
      cur_level = L;
      lo.built = true;
    }
    return lo;
  }
};

// ---------------------------------------------------------------------------
// Generic kernel for any field order up to 256. Node keys are the RREF basis
// rows serialized bytewise; children are grouped per parent by the projective
// direction of the reduced image. Instances on this path are small, so it
// runs single threaded and leans on make_subspace for canonical form.

struct KernGen {
  const Field* F = nullptr;
  uint32_t kk = 0, ff = 0;
  const ImageSet* I = nullptr;
  std::vector<std::string> frontier{std::string()};
  uint32_t cur_level = 0;

  void init(const Ctx& cx) {
    F = cx.C->field.get();
    kk = cx.k;
    ff = cx.f;
    I = cx.I;
  }

  uint32_t max_extend() const { return 1; }

  std::vector<std::vector<uint32_t>> decode(const std::string& key) const {
    std::vector<std::vector<uint32_t>> rows(key.size() / ff,
                                            std::vector<uint32_t>(ff));
    for (size_t t = 0; t < rows.size(); ++t)
      for (uint32_t j = 0; j < ff; ++j)
        rows[t][j] = uint8_t(key[t * ff + j]);
    return rows;
  }

  static std::vector<uint32_t> pivots_of(
      const std::vector<std::vector<uint32_t>>& rows) {
    std::vector<uint32_t> p(rows.size());
    for (size_t t = 0; t < rows.size(); ++t) {
      uint32_t j = 0;
      while (j < rows[t].size() && !rows[t][j]) ++j;
      p[t] = j;
    }
    return p;
  }

  std::vector<uint32_t> reduce(std::vector<uint32_t> v,
                               const std::vector<std::vector<uint32_t>>& rows,
                               const std::vector<uint32_t>& piv) const {
    for (size_t t = 0; t < rows.size(); ++t) {
      uint32_t c = v[piv[t]];
      if (!c) continue;
      for (uint32_t j = 0; j < ff; ++j)
        v[j] = F->sub(v[j], F->mul(c, rows[t][j]));
    }
    return v;
  }

  static bool is_zero_vec(const std::vector<uint32_t>& v) {
    for (uint32_t x : v)
      if (x) return false;
    return true;
  }

  std::string norm_dir(const std::vector<uint32_t>& v) const {
    uint32_t j = 0;
    while (!v[j]) ++j;
    uint32_t s = F->inv(v[j]);
    std::string out(ff, '\0');
    for (uint32_t t = 0; t < ff; ++t) out[t] = char(uint8_t(F->mul(s, v[t])));
    return out;
  }

  std::string canon_child(const std::vector<std::vector<uint32_t>>& rows,
                          const std::vector<uint32_t>& extra) const {
    Mat st(uint32_t(rows.size()) + 1, ff);
    for (size_t t = 0; t < rows.size(); ++t)
      for (uint32_t j = 0; j < ff; ++j) st.at(uint32_t(t), j) = rows[t][j];
    for (uint32_t j = 0; j < ff; ++j)
      st.at(uint32_t(rows.size()), j) = extra[j];
    linalg::Subspace S = linalg::make_subspace(*F, st, ff);
    std::string key(size_t(S.basis.rows) * ff, '\0');
    for (uint32_t t = 0; t < S.basis.rows; ++t)
      for (uint32_t j = 0; j < ff; ++j)
        key[size_t(t) * ff + j] = char(uint8_t(S.basis.at(t, j)));
    return key;
  }

  std::vector<uint32_t> pick_members(
      const std::vector<char>& is_mem, uint32_t target) const {
    RowSpace rs{F, I->mats[0].rows * I->mats[0].cols, {}, {}};
    std::vector<uint32_t> mem;
    for (size_t i = 0; i < is_mem.size(); ++i) {
      if (!is_mem[i]) continue;
      if (!rs.add(I->mats[i].a)) continue;
      mem.push_back(uint32_t(i));
      if (mem.size() == target) break;
    }
    return mem;
  }

  std::vector<uint32_t> test_root() const {
    std::vector<char> is_mem(I->proj.size(), 0);
    for (size_t i = 0; i < I->proj.size(); ++i)
      is_mem[i] = is_zero_vec(I->proj[i]);
    std::vector<uint32_t> mem = pick_members(is_mem, kk);
    return mem.size() == kk ? mem : std::vector<uint32_t>();
  }

  std::vector<uint32_t> members_for(const std::string& key,
                                    uint32_t target) const {
    auto rows = decode(key);
    auto piv = pivots_of(rows);
    std::vector<char> is_mem(I->proj.size(), 0);
    for (size_t i = 0; i < I->proj.size(); ++i)
      is_mem[i] = is_zero_vec(reduce(I->proj[i], rows, piv));
    std::vector<uint32_t> mem = pick_members(is_mem, target);
    internal_check(mem.size() == target, "witness lost its spanning members");
    return mem;
  }

  LevelOutcome process_level(uint32_t L, uint32_t e, bool need_test,
                             bool try_build, Ctx& cx) {
    internal_check(e == 1, "bytewise kernel only extends one step");
    LevelOutcome lo;
    const uint32_t target = kk + L;
    std::set<std::string> next;
    std::set<std::string> tested;
    std::vector<std::string> wits;
    const size_t ni = I->proj.size();
    std::vector<std::string> dir(ni);
    std::vector<char> zero(ni);
    for (const std::string& pkey : frontier) {
      auto rows = decode(pkey);
      auto piv = pivots_of(rows);
      uint32_t zc = 0;
      std::vector<std::string> order;
      std::unordered_map<std::string, uint32_t> group;
      for (size_t i = 0; i < ni; ++i) {
        std::vector<uint32_t> r = reduce(I->proj[i], rows, piv);
        zero[i] = is_zero_vec(r);
        if (zero[i]) {
          ++zc;
          dir[i].clear();
          continue;
        }
        dir[i] = norm_dir(r);
        auto it = group.find(dir[i]);
        if (it == group.end()) {
          group.emplace(dir[i], 1);
          order.push_back(dir[i]);
        } else {
          ++it->second;
        }
      }
      lo.level_nodes += order.size();
      if (cx.nodes + lo.level_nodes > cx.node_budget || cx.dl.expired()) {
        lo.budget_hit = true;
        lo.note =
            std::string(cx.nodes + lo.level_nodes > cx.node_budget ? "node"
                                                                   : "time") +
            " budget exhausted at dimension " + std::to_string(L);
        return lo;
      }
      for (const std::string& g : order) {
        std::vector<uint32_t> extra(ff);
        for (uint32_t j = 0; j < ff; ++j) extra[j] = uint8_t(g[j]);
        std::string key = canon_child(rows, extra);
        if (need_test && zc + group[g] >= target &&
            tested.insert(key).second) {
          std::vector<char> is_mem(ni, 0);
          for (size_t i = 0; i < ni; ++i)
            is_mem[i] = zero[i] || dir[i] == g;
          if (pick_members(is_mem, target).size() == target)
            wits.push_back(key);
        }
        if (try_build) {
          next.insert(key);
          if (next.size() > kFrontierCap) {
            lo.budget_hit = true;
            lo.note = "frontier cap hit at dimension " + std::to_string(L);
            return lo;
          }
        }
      }
    }
    if (!wits.empty()) {
      const std::string& best = *std::min_element(wits.begin(), wits.end());
      lo.witness = true;
      lo.members = members_for(best, target);
      return lo;
    }
    if (try_build) {
      frontier.assign(next.begin(), next.end());
      cur_level = L;
      lo.built = true;
    }
    return lo;
  }
};

// ---------------------------------------------------------------------------
// codim_enum: visit every subspace of the quotient by dimension and test its
// preimage. Only sensible when the subspace counts are tiny, but then it is
// a strategy with no frontier state at all, and doubles as an oracle.

EngineOut codim_drive(Ctx& cx) {
  const Field& F = *cx.C->field;
  EngineOut out;
  uint32_t lower = cx.lower0;
  const uint32_t upper = cx.upper0;
  KernGen helper;
  helper.init(cx);
  const size_t ni = cx.I->proj.size();
  if (cx.k >= lower) {
    cx.nodes += 1;
    std::vector<uint32_t> mem = helper.test_root();
    if (!mem.empty()) {
      out.stop = Stop::exact;
      out.value = cx.k;
      out.members = std::move(mem);
      out.best_lower = cx.k;
      return out;
    }
  }
  out.ruled = 1;
  lower = std::max(lower, cx.k + 1);
  for (uint32_t L = 1; L <= cx.f; ++L) {
    uint32_t target = cx.k + L;
    if (cx.stop_above && target > cx.stop_above) {
      out.stop = Stop::above;
      out.best_lower = lower;
      return out;
    }
    if (target == upper) {
      out.stop = Stop::exact;
      out.value = upper;
      out.used_greedy = true;
      out.best_lower = upper;
      return out;
    }
    if (target >= lower) {
      std::vector<uint32_t> found;
      bool over = false;
      std::string over_note;
      linalg::enumerate_subspaces(F, cx.f, L, [&](const Mat& U) {
        cx.nodes += 1;
        if (cx.nodes > cx.node_budget || cx.dl.expired()) {
          over = true;
          over_note =
              std::string(cx.nodes > cx.node_budget ? "node" : "time") +
              " budget exhausted at dimension " + std::to_string(L);
          return false;
        }
        std::vector<std::vector<uint32_t>> rows(U.rows,
                                                std::vector<uint32_t>(cx.f));
        for (uint32_t t = 0; t < U.rows; ++t)
          for (uint32_t j = 0; j < cx.f; ++j) rows[t][j] = U.at(t, j);
        auto piv = KernGen::pivots_of(rows);
        std::vector<char> is_mem(ni, 0);
        uint32_t hits = 0;
        for (size_t i = 0; i < ni; ++i) {
          is_mem[i] =
              KernGen::is_zero_vec(helper.reduce(cx.I->proj[i], rows, piv));
          hits += is_mem[i];
        }
        if (hits < target) return true;
        std::vector<uint32_t> mem = helper.pick_members(is_mem, target);
        if (mem.size() == target) {
          found = std::move(mem);
          return false;
        }
        return true;
      });
      if (over) {
        out.stop = Stop::budget;
        out.best_lower = lower;
        out.note = over_note;
        return out;
      }
      if (!found.empty()) {
        out.stop = Stop::exact;
        out.value = target;
        out.members = std::move(found);
        out.best_lower = target;
        return out;
      }
    }
    out.ruled = L + 1;
    lower = std::max(lower, target + 1);
  }
  internal_check(false, "subspace walk exhausted the whole quotient");
  return out;
}

// ---------------------------------------------------------------------------
// exhaustive: iterative deepening over rank-one supports in index order.
// The oracle strategy: no quotient bookkeeping, every decomposition length
// tried from the lower bound up.

struct DfsState {
  Ctx* cx = nullptr;
  uint32_t R = 0;
  RowSpace chosen;   // span of the picked rank ones
  RowSpace all;      // span of picks plus the code
  std::vector<uint32_t> picks;
  bool over = false;
  std::string over_note;

  bool dfs(uint32_t from) {
    if (picks.size() == R)
      return all.dim() == R;  // chosen spans everything, code included
    uint32_t slots = R - uint32_t(picks.size());
    if (all.dim() - uint32_t(picks.size()) > slots) return false;
    const auto& I = *cx->I;
    for (uint32_t i = from; i < I.mats.size(); ++i) {
      cx->nodes += 1;
      if (cx->nodes > cx->node_budget || cx->dl.expired()) {
        over = true;
        over_note =
            std::string(cx->nodes > cx->node_budget ? "node" : "time") +
            " budget exhausted in the depth-first walk";
        return false;
      }
      size_t c0 = chosen.rows.size(), a0 = all.rows.size();
      if (!chosen.add(I.mats[i].a)) continue;
      all.add(I.mats[i].a);
      picks.push_back(i);
      if (dfs(i + 1)) return true;
      if (over) return false;
      picks.pop_back();
      chosen.truncate(c0);
      all.truncate(a0);
    }
    return false;
  }
};

EngineOut exhaustive_drive(Ctx& cx) {
  const Field& F = *cx.C->field;
  const uint32_t N = cx.Q->N;
  EngineOut out;
  uint32_t lower = cx.lower0;
  const uint32_t upper = cx.upper0;
  for (uint32_t R = lower; R <= upper; ++R) {
    if (cx.stop_above && R > cx.stop_above) {
      out.stop = Stop::above;
      out.best_lower = lower;
      out.ruled = lower - cx.k;
      return out;
    }
    if (R == upper) {
      out.stop = Stop::exact;
      out.value = upper;
      out.used_greedy = true;
      out.best_lower = upper;
      out.ruled = upper - cx.k;
      return out;
    }
    DfsState st;
    st.cx = &cx;
    st.R = R;
    st.chosen = RowSpace{&F, N, {}, {}};
    st.all = RowSpace{&F, N, {}, {}};
    for (uint32_t g = 0; g < cx.k; ++g) {
      std::vector<uint32_t> row(N);
      for (uint32_t j = 0; j < N; ++j) row[j] = cx.C->gen.at(g, j);
      st.all.add(std::move(row));
    }
    bool hit = st.dfs(0);
    if (st.over) {
      out.stop = Stop::budget;
      out.best_lower = lower;
      out.ruled = lower - cx.k;
      out.note = st.over_note;
      return out;
    }
    if (hit) {
      out.stop = Stop::exact;
      out.value = R;
      out.members = st.picks;
      out.best_lower = R;
      out.ruled = R - cx.k;
      return out;
    }
    lower = R + 1;
  }
  internal_check(false, "deepening walked past the constructive bound");
  return out;
}

// ---------------------------------------------------------------------------
// Driver: bounds first, search only across the remaining window.

struct Prep {
  uint32_t d = 0;
  bool d_exact = false;
  uint32_t lower = 0;
  std::string origin;
  SimpleSum greedy;
  uint32_t upper = 0;
};

blockcode::NqBounds nq_cached(uint64_t q, uint32_t k, uint32_t d) {
  static std::mutex mu;
  static std::map<std::tuple<uint64_t, uint32_t, uint32_t>,
                  blockcode::NqBounds>
      cache;
  std::lock_guard<std::mutex> g(mu);
  auto key = std::make_tuple(q, k, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  blockcode::NqBounds b = blockcode::nq_bounds(q, k, d);
  cache.emplace(key, b);
  return b;
}

Prep prepare(const MatrixCode& C) {
  Prep P;
  uint32_t k = C.k();
  DistResult dist = rankcode::min_distance(C, kDistCap);
  P.lower = k;
  P.origin = "dimension";
  if (dist.exact) {
    P.d = dist.d;
    P.d_exact = true;
    uint32_t kr = k + dist.d - 1;
    if (kr > P.lower) {
      P.lower = kr;
      P.origin = "kruskal";
    }
    blockcode::NqBounds nq = nq_cached(field_order(*C.field), k, dist.d);
    if (nq.lower > P.lower) {
      P.lower = uint32_t(nq.lower);
      P.origin = "nq";
    }
  }
  P.greedy = greedy_cover(C);
  P.upper = P.greedy.length();
  internal_check(P.lower <= P.upper, "lower bound above the constructive one");
  return P;
}

struct SearchRet {
  TrkResult res;
  Stop stop = Stop::exact;
};

SearchRet run_search(const MatrixCode& C, const SearchConfig& cfg,
                     uint32_t stop_above) {
  require(C.field != nullptr, "code carries no field");
  require(C.k() >= 1, "nonzero code required");
  require(cfg.node_budget >= 1, "node budget must be positive");
  require(cfg.worker_count >= 1, "worker count must be positive");

  SearchRet ret;
  TrkResult& R = ret.res;
  Prep P = prepare(C);
  uint32_t k = C.k();

  if (P.upper == P.lower) {
    R.cert.upper = P.greedy;
    R.cert.lower = P.lower;
    R.cert.lower_origin = P.origin;
    R.cert.exact = true;
    R.strategy_used = "bounds";
    R.levels_ruled_out = P.upper - k;
    ret.stop = Stop::exact;
    return ret;
  }
  if (stop_above && P.lower > stop_above) {
    R.cert.upper = P.greedy;
    R.cert.lower = P.lower;
    R.cert.lower_origin = P.origin;
    R.cert.exact = false;
    R.cert.note = "stopped early: the lower bound already exceeds " +
                  std::to_string(stop_above);
    R.strategy_used = "bounds";
    ret.stop = Stop::above;
    return ret;
  }

  Quotient Q = make_quotient(C);
  ImageSet I = make_images(C, Q);

  // A short descent often tightens the constructive bound enough for the
  // level walk to close at its certificate instead of scanning a top level.
  uint64_t descent_nodes = 0;
  if (field_order(*C.field) == 2 && Q.N <= 64 && Q.f >= 1 && Q.f <= 14) {
    DescentOut dsc = descend_cover(Q, I, k, P.lower);
    descent_nodes = dsc.nodes;
    if (dsc.dim < P.upper) {
      std::vector<Mat> terms;
      terms.reserve(dsc.members.size());
      for (uint32_t idx : dsc.members) terms.push_back(I.mats[idx]);
      P.greedy = assemble_sum(C, terms);
      P.upper = P.greedy.length();
      internal_check(P.upper == dsc.dim,
                     "descent certificate length disagrees with its leaf");
    }
    if (P.upper == P.lower) {
      R.cert.upper = P.greedy;
      R.cert.lower = P.lower;
      R.cert.lower_origin = P.origin;
      R.cert.exact = true;
      R.strategy_used = "bounds";
      R.nodes_explored = descent_nodes;
      R.levels_ruled_out = P.upper - k;
      ret.stop = Stop::exact;
      return ret;
    }
  }

  Strategy strat = cfg.strategy;
  if (strat == Strategy::auto_pick) {
    long double total = 0;
    bool small = true;
    for (uint32_t r = 0; r <= Q.f && small; ++r) {
      try {
        total += linalg::gaussian_binomial(field_order(*C.field), Q.f, r);
      } catch (const UsageError&) {
        small = false;
      }
      if (total > kSmallQuotient) small = false;
    }
    strat = small ? Strategy::codim_enum : Strategy::quotient_bfs;
  }

  Ctx cx;
  cx.C = &C;
  cx.Q = &Q;
  cx.I = &I;
  cx.k = k;
  cx.f = Q.f;
  cx.lower0 = P.lower;
  cx.upper0 = P.upper;
  cx.stop_above = stop_above;
  cx.workers = cfg.worker_count;
  cx.node_budget = cfg.node_budget;
  cx.dl.limit_ms = cfg.time_budget_ms;

  EngineOut out;
  if (strat == Strategy::quotient_bfs) {
    if (field_order(*C.field) == 2 && Q.N <= 64 && Q.f >= 1 && Q.f <= 20) {
      KernGf2 ker;
      ker.init(cx);
      out = bfs_drive(cx, ker);
      R.strategy_used = "quotient_bfs";
    } else {
      require(field_order(*C.field) <= 256,
              "quotient search supports field orders up to 256");
      KernGen ker;
      ker.init(cx);
      out = bfs_drive(cx, ker);
      R.strategy_used = "quotient_bfs";
    }
  } else if (strat == Strategy::codim_enum) {
    out = codim_drive(cx);
    R.strategy_used = "codim_enum";
  } else {
    out = exhaustive_drive(cx);
    R.strategy_used = "exhaustive";
  }

  R.nodes_explored = cx.nodes + descent_nodes;
  R.levels_ruled_out = out.ruled;
  ret.stop = out.stop;
  switch (out.stop) {
    case Stop::exact: {
      if (out.used_greedy) {
        R.cert.upper = P.greedy;
      } else {
        std::vector<Mat> terms;
        terms.reserve(out.members.size());
        for (uint32_t idx : out.members) terms.push_back(I.mats[idx]);
        R.cert.upper = assemble_sum(C, terms);
      }
      internal_check(R.cert.upper.length() == out.value,
                     "certificate length disagrees with the search value");
      R.cert.lower = out.value;
      R.cert.lower_origin = out.value > P.lower ? "search" : P.origin;
      R.cert.exact = true;
      break;
    }
    case Stop::budget: {
      R.cert.upper = P.greedy;
      R.cert.lower = std::max(out.best_lower, P.lower);
      R.cert.lower_origin = out.best_lower > P.lower ? "search" : P.origin;
      R.cert.exact = false;
      R.cert.note = out.note;
      break;
    }
    case Stop::above: {
      R.cert.upper = P.greedy;
      R.cert.lower = std::max(out.best_lower, P.lower);
      R.cert.lower_origin = out.best_lower > P.lower ? "search" : P.origin;
      R.cert.exact = false;
      R.cert.note = "stopped early: the tensor rank exceeds " +
                    std::to_string(stop_above);
      break;
    }
  }
  return ret;
}

}  // namespace

TrkResult tensor_rank(const MatrixCode& C, const SearchConfig& cfg) {
  return run_search(C, cfg, 0).res;
}

TrkResult tensor_rank(const FieldPtr& F, const Tensor3& X,
                      const SearchConfig& cfg) {
  require(F != nullptr, "tensor carries no field");
  require(X.n1 >= 1 && X.n2 >= 1 && X.n3 >= 1, "tensor has an empty axis");
  std::vector<Mat> slices;
  slices.reserve(X.n1);
  for (uint32_t i = 0; i < X.n1; ++i) slices.push_back(tensor::slice1(X, i));
  MatrixCode C = rankcode::make_code(F, X.n2, X.n3, slices);
  return tensor_rank(C, cfg);
}

std::vector<uint64_t> rank_spectrum(const MatrixCode& C, uint64_t cap) {
  require(C.field != nullptr, "code carries no field");
  require(C.k() >= 1, "nonzero code required");
  const Field& F = *C.field;
  uint64_t q = field_order(F);
  uint32_t k = C.k();
  long double classes = 0;
  long double p = 1;
  for (uint32_t i = 0; i < k; ++i) {
    classes += p;
    p *= q;
  }
  if (classes > (long double)cap)
    throw BudgetError("rank spectrum needs more projective classes than the cap " +
                      std::to_string(cap));
  std::vector<uint64_t> counts(std::min(C.n, C.m) + 1, 0);
  linalg::enumerate_projective(F, k, [&](const std::vector<uint32_t>& coeff) {
    Mat M = rankcode::codeword(C, coeff);
    uint32_t r = (q == 2 && C.m <= 64) ? linalg::rank2(linalg::pack2(M))
                                       : linalg::rank(F, M);
    counts[r] += q - 1;
    return true;
  });
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  long double expect = p - 1;  // q^k - 1 nonzero codewords
  internal_check((long double)total == expect, "rank spectrum lost codewords");
  internal_check(counts[0] == 0, "a nonzero codeword claimed rank zero");
  return counts;
}

GtrProfile gen_tensor_ranks(const MatrixCode& C, const SearchConfig& cfg) {
  require(C.field != nullptr, "code carries no field");
  require(C.k() >= 1, "nonzero code required");
  const Field& F = *C.field;
  uint32_t k = C.k();
  uint64_t q = field_order(F);
  constexpr uint64_t kSubcodeCap = 100000;
  GtrProfile out;

  for (uint32_t r = 1; r <= k; ++r) {
    uint64_t count = 0;
    bool countable = true;
    try {
      count = linalg::gaussian_binomial(q, k, r);
    } catch (const UsageError&) {
      countable = false;
    }
    if (!countable || count > kSubcodeCap) {
      out.complete = false;
      out.note = "stopped at r = " + std::to_string(r) + ": " +
                 (countable ? std::to_string(count) : std::string("too many")) +
                 " subcodes exceed the enumeration cap";
      break;
    }

    // Pass 1: bounds for every r-dimensional subcode.
    struct Sub {
      MatrixCode code;
      uint32_t lower = 0, upper = 0;
      std::string origin;
      SimpleSum greedy;
    };
    std::vector<Sub> subs;
    subs.reserve(size_t(count));
    linalg::enumerate_subspaces(F, k, r, [&](const Mat& U) {
      Mat rows = linalg::mat_mul(F, U, C.gen);
      Sub s;
      s.code = rankcode::from_vectorized(C.field, C.n, C.m, rows);
      internal_check(s.code.k() == r, "subcode dimension collapsed");
      Prep P = prepare(s.code);
      s.lower = P.lower;
      s.upper = P.upper;
      s.origin = P.origin;
      s.greedy = std::move(P.greedy);
      subs.push_back(std::move(s));
      return true;
    });

    uint32_t floor_r =
        r == 1 ? 1
               : std::max(out.values[r - 2] + 1, out.values[0] + r - 1);
    const uint32_t kInf = ~uint32_t(0);
    uint32_t best = kInf;
    TrkCertificate best_cert;

    // Bound-met subcodes resolve for free; sweep them first so searches can
    // stop as soon as they are provably no better.
    for (const Sub& s : subs) {
      if (s.lower != s.upper || s.upper >= best) continue;
      best = s.upper;
      best_cert.upper = s.greedy;
      best_cert.lower = s.lower;
      best_cert.lower_origin = s.origin;
      best_cert.exact = true;
      best_cert.note.clear();
    }
    bool gave_up = false;
    if (best != floor_r || best == kInf) {
      for (const Sub& s : subs) {
        if (s.lower == s.upper) continue;
        if (best != kInf && s.lower >= best) continue;
        SearchRet sr =
            run_search(s.code, cfg, best == kInf ? 0 : best - 1);
        if (sr.stop == Stop::above) continue;
        if (sr.stop == Stop::budget) {
          out.complete = false;
          out.note = "stopped at r = " + std::to_string(r) + ": " +
                     sr.res.cert.note;
          gave_up = true;
          break;
        }
        uint32_t v = sr.res.cert.upper.length();
        if (v < best) {
          best = v;
          best_cert = sr.res.cert;
        }
        if (best == floor_r) break;
      }
    }
    if (gave_up) break;
    internal_check(best != kInf, "no subcode resolved at this dimension");
    out.values.push_back(best);
    out.certificates.push_back(std::move(best_cert));
  }

  // The profile obeys its bound chain on every computed prefix; checked on
  // each run, not just under test.
  for (size_t i = 0; i + 1 < out.values.size(); ++i)
    internal_check(out.values[i] < out.values[i + 1],
                   "profile failed to increase strictly");
  if (!out.values.empty()) {
    uint32_t d1 = out.values[0];
    for (size_t i = 0; i < out.values.size(); ++i)
      internal_check(out.values[i] >= d1 + i,
                     "profile dipped under its floor");
    if (out.complete && out.values.size() == k) {
      uint32_t trk = out.values[k - 1];
      DistResult dist = rankcode::min_distance(C, kDistCap);
      if (dist.exact)
        internal_check(d1 == dist.d, "profile start is not the minimum rank");
      for (size_t i = 0; i < out.values.size(); ++i)
        internal_check(out.values[i] + (k - 1 - i) <= trk,
                       "profile exceeded its ceiling");
    }
  }
  return out;
}

MtrVerdict mtr_verdict(const MatrixCode& C, const SearchConfig& cfg) {
  require(C.field != nullptr, "code carries no field");
  require(C.k() >= 1, "nonzero code required");
  MtrVerdict V;
  V.trk = tensor_rank(C, cfg);
  DistResult dist = rankcode::min_distance(C, kDistCap);
  if (!dist.exact) {
    V.category = MtrCategory::unknown;
    V.evidence = "minimum rank not pinned within the enumeration cap";
    return V;
  }
  V.d = dist.d;
  uint32_t k = C.k();
  V.nq = nq_cached(field_order(*C.field), k, dist.d);
  uint32_t kr = k + dist.d - 1;
  if (V.trk.cert.exact) {
    uint32_t t = V.trk.cert.upper.length();
    if (t == kr) {
      V.category = MtrCategory::mtr;
      V.evidence = "tensor rank " + std::to_string(t) +
                   " meets the floor k + d - 1 = " + std::to_string(kr);
    } else if (t == V.nq.lower) {
      V.category = MtrCategory::tensor_rank_extremal;
      V.evidence = "tensor rank " + std::to_string(t) +
                   " meets the least possible [*, k, d] code length";
    } else if (t > V.nq.upper) {
      V.category = MtrCategory::neither;
      V.evidence = "tensor rank " + std::to_string(t) +
                   " exceeds the [*, k, d] code length " +
                   std::to_string(V.nq.upper) + " built by " + V.nq.method;
    } else {
      V.category = MtrCategory::unknown;
      V.evidence = "shortest [*, k, d] code length only known between " +
                   std::to_string(V.nq.lower) + " and " +
                   std::to_string(V.nq.upper);
    }
  } else {
    if (V.trk.cert.lower > V.nq.upper) {
      V.category = MtrCategory::neither;
      V.evidence = "tensor rank is at least " +
                   std::to_string(V.trk.cert.lower) +
                   ", already above the [*, k, d] code length " +
                   std::to_string(V.nq.upper);
    } else {
      V.category = MtrCategory::unknown;
      V.evidence = "tensor rank only known between " +
                   std::to_string(V.trk.cert.lower) + " and " +
                   std::to_string(V.trk.cert.upper.length()) + "; " +
                   V.trk.cert.note;
    }
  }
  return V;
}

InequivResult inequivalence_witness(const MatrixCode& C1, const MatrixCode& C2,
                                    const SearchConfig& cfg) {
  require(C1.field != nullptr && C2.field != nullptr, "code carries no field");
  require(C1.k() >= 1 && C2.k() >= 1, "nonzero code required");
  require(C1.n == C2.n && C1.m == C2.m &&
              field_order(*C1.field) == field_order(*C2.field),
          "codes must share the ambient matrix space");
  InequivResult R;
  std::string climbed = "dimension";

  if (C1.k() != C2.k()) {
    R.distinguished = true;
    R.invariant = "dimension";
    R.value1 = {C1.k()};
    R.value2 = {C2.k()};
    return R;
  }

  DistResult d1 = rankcode::min_distance(C1, kDistCap);
  DistResult d2 = rankcode::min_distance(C2, kDistCap);
  std::vector<std::string> skipped;
  if (d1.exact && d2.exact) {
    climbed = "minimum rank";
    if (d1.d != d2.d) {
      R.distinguished = true;
      R.invariant = "min_rank";
      R.value1 = {d1.d};
      R.value2 = {d2.d};
      return R;
    }
    try {
      std::vector<uint64_t> s1 = rank_spectrum(C1);
      std::vector<uint64_t> s2 = rank_spectrum(C2);
      climbed = "rank spectrum";
      if (s1 != s2) {
        R.distinguished = true;
        R.invariant = "rank_spectrum";
        R.value1 = s1;
        R.value2 = s2;
        return R;
      }
    } catch (const BudgetError&) {
      skipped.push_back("rank spectrum (enumeration cap)");
    }
  } else {
    skipped.push_back("minimum rank and spectrum (enumeration cap)");
  }

  GtrProfile p1 = gen_tensor_ranks(C1, cfg);
  GtrProfile p2 = gen_tensor_ranks(C2, cfg);
  size_t common = std::min(p1.values.size(), p2.values.size());
  for (size_t i = 0; i < common; ++i) {
    if (p1.values[i] != p2.values[i]) {
      R.distinguished = true;
      R.invariant = "gtr_profile";
      R.value1.assign(p1.values.begin(), p1.values.end());
      R.value2.assign(p2.values.begin(), p2.values.end());
      R.note = "first difference at subcode dimension " + std::to_string(i + 1);
      return R;
    }
  }
  if (p1.complete && p2.complete) {
    climbed = "generalized profile";
  } else {
    skipped.push_back("generalized profile beyond r = " +
                      std::to_string(common) + " (" +
                      (p1.complete ? p2.note : p1.note) + ")");
  }

  rankcode::MatrixCode D1 = rankcode::dual(C1);
  rankcode::MatrixCode D2 = rankcode::dual(C2);
  TrkResult t1 = tensor_rank(D1, cfg);
  TrkResult t2 = tensor_rank(D2, cfg);
  if (t1.cert.exact && t2.cert.exact) {
    climbed = "dual tensor rank";
    if (t1.cert.upper.length() != t2.cert.upper.length()) {
      R.distinguished = true;
      R.invariant = "dual_tensor_rank";
      R.value1 = {t1.cert.upper.length()};
      R.value2 = {t2.cert.upper.length()};
      return R;
    }
  } else {
    skipped.push_back("dual tensor rank (search not exact within budget)");
  }

  // Full dual profiles only when the subcode enumeration stays trivial.
  uint32_t kd = D1.k();
  bool dual_profile_ok = kd >= 1;
  long double dual_subs = 0;
  for (uint32_t r = 1; r <= kd && dual_profile_ok; ++r) {
    try {
      dual_subs += linalg::gaussian_binomial(field_order(*C1.field), kd, r);
    } catch (const UsageError&) {
      dual_profile_ok = false;
    }
    if (dual_subs > 4096) dual_profile_ok = false;
  }
  if (dual_profile_ok) {
    GtrProfile q1 = gen_tensor_ranks(D1, cfg);
    GtrProfile q2 = gen_tensor_ranks(D2, cfg);
    if (q1.complete && q2.complete) {
      climbed = "dual profile";
      if (q1.values != q2.values) {
        R.distinguished = true;
        R.invariant = "dual_gtr_profile";
        R.value1.assign(q1.values.begin(), q1.values.end());
        R.value2.assign(q2.values.begin(), q2.values.end());
        return R;
      }
    }
  } else {
    skipped.push_back("dual profile (subcode count)");
  }

  R.distinguished = false;
  R.note = "indistinguishable through " + climbed;
  for (const std::string& s : skipped) R.note += "; skipped " + s;
  return R;
}

}  // namespace rkt::trank
