#include "rktensor/tensor.hpp"

#include <cmath>

namespace rkt::tensor {

Tensor3 from_slices(const std::vector<Mat>& slices) {
  require(!slices.empty(), "tensor needs at least one slice");
  uint32_t n2 = slices[0].rows, n3 = slices[0].cols;
  for (const auto& S : slices)
    require(S.rows == n2 && S.cols == n3, "slice shapes differ");
  Tensor3 X(uint32_t(slices.size()), n2, n3);
  for (uint32_t i = 0; i < X.n1; ++i)
    for (uint32_t j = 0; j < n2; ++j)
      for (uint32_t l = 0; l < n3; ++l) X.at(i, j, l) = slices[i].at(j, l);
  return X;
}

Mat slice1(const Tensor3& X, uint32_t i) {
  Mat M(X.n2, X.n3);
  for (uint32_t j = 0; j < X.n2; ++j)
    for (uint32_t l = 0; l < X.n3; ++l) M.at(j, l) = X.at(i, j, l);
  return M;
}

Mat slice2(const Tensor3& X, uint32_t j) {
  Mat M(X.n1, X.n3);
  for (uint32_t i = 0; i < X.n1; ++i)
    for (uint32_t l = 0; l < X.n3; ++l) M.at(i, l) = X.at(i, j, l);
  return M;
}

Mat slice3(const Tensor3& X, uint32_t l) {
  Mat M(X.n1, X.n2);
  for (uint32_t i = 0; i < X.n1; ++i)
    for (uint32_t j = 0; j < X.n2; ++j) M.at(i, j) = X.at(i, j, l);
  return M;
}

bool is_zero(const Tensor3& X) {
  for (uint32_t x : X.a)
    if (x) return false;
  return true;
}

void validate(const Field& F, const SimpleSum& S) {
  (void)F;
  for (const auto& t : S.triples) {
    require(t.u.size() == S.n1 && t.v.size() == S.n2 && t.w.size() == S.n3,
            "component length mismatch in simple sum");
    auto nz = [](const std::vector<uint32_t>& x) {
      for (uint32_t c : x)
        if (c) return true;
      return false;
    };
    require(nz(t.u) && nz(t.v) && nz(t.w),
            "simple sum contains a zero component");
  }
}

Tensor3 to_coordinates(const Field& F, const SimpleSum& S) {
  validate(F, S);
  Tensor3 X(S.n1, S.n2, S.n3);
  for (const auto& t : S.triples) {
    for (uint32_t i = 0; i < S.n1; ++i) {
      if (!t.u[i]) continue;
      for (uint32_t j = 0; j < S.n2; ++j) {
        if (!t.v[j]) continue;
        uint32_t uv = F.mul(t.u[i], t.v[j]);
        for (uint32_t l = 0; l < S.n3; ++l)
          if (t.w[l]) X.at(i, j, l) = F.add(X.at(i, j, l), F.mul(uv, t.w[l]));
      }
    }
  }
  return X;
}

Tensor3 tensor_mult(const Field& F, uint32_t axis, const Mat& A,
                    const Tensor3& X) {
  require(axis >= 1 && axis <= 3, "axis must be 1, 2 or 3");
  uint32_t nd = axis == 1 ? X.n1 : axis == 2 ? X.n2 : X.n3;
  require(A.cols == nd, "matrix width must match the axis dimension");
  Tensor3 Y(axis == 1 ? A.rows : X.n1, axis == 2 ? A.rows : X.n2,
            axis == 3 ? A.rows : X.n3);
  for (uint32_t i = 0; i < Y.n1; ++i)
    for (uint32_t j = 0; j < Y.n2; ++j)
      for (uint32_t l = 0; l < Y.n3; ++l) {
        uint32_t acc = 0;
        for (uint32_t t = 0; t < nd; ++t) {
          uint32_t a = axis == 1 ? A.at(i, t) : axis == 2 ? A.at(j, t) : A.at(l, t);
          if (!a) continue;
          uint32_t x = axis == 1   ? X.at(t, j, l)
                       : axis == 2 ? X.at(i, t, l)
                                   : X.at(i, j, t);
          if (x) acc = F.add(acc, F.mul(a, x));
        }
        Y.at(i, j, l) = acc;
      }
  return Y;
}

Mat tensor_mult_vec(const Field& F, uint32_t axis,
                    const std::vector<uint32_t>& u, const Tensor3& X) {
  Mat A(1, uint32_t(u.size()));
  for (uint32_t i = 0; i < A.cols; ++i) A.at(0, i) = u[i];
  Tensor3 Y = tensor_mult(F, axis, A, X);
  // The collapsed axis has size 1; return the remaining two in order.
  if (axis == 1) return slice1(Y, 0);
  if (axis == 2) return slice2(Y, 0);
  return slice3(Y, 0);
}

Subspace slice_space(const Field& F, const Tensor3& X, uint32_t axis) {
  require(axis >= 1 && axis <= 3, "axis must be 1, 2 or 3");
  uint32_t count = axis == 1 ? X.n1 : axis == 2 ? X.n2 : X.n3;
  uint32_t ambient = axis == 1   ? X.n2 * X.n3
                     : axis == 2 ? X.n1 * X.n3
                                 : X.n1 * X.n2;
  Mat rows(count, ambient);
  for (uint32_t s = 0; s < count; ++s) {
    Mat sl = axis == 1 ? slice1(X, s) : axis == 2 ? slice2(X, s) : slice3(X, s);
    for (uint32_t t = 0; t < ambient; ++t) rows.at(s, t) = sl.a[t];
  }
  return linalg::make_subspace(F, rows, ambient);
}

uint32_t slice_dim(const Field& F, const Tensor3& X, uint32_t axis) {
  return slice_space(F, X, axis).dim();
}

bool nondegenerate(const Field& F, const Tensor3& X, uint32_t axis) {
  uint32_t nd = axis == 1 ? X.n1 : axis == 2 ? X.n2 : X.n3;
  return slice_dim(F, X, axis) == nd;
}

Mat double_dot(const Field& F, const Tensor3& X, const Tensor3& Y) {
  require(X.n2 == Y.n2 && X.n3 == Y.n3,
          "double dot needs matching trailing shapes");
  Mat M(X.n1, Y.n1);
  for (uint32_t i = 0; i < X.n1; ++i)
    for (uint32_t s = 0; s < Y.n1; ++s) {
      uint32_t acc = 0;
      for (uint32_t j = 0; j < X.n2; ++j)
        for (uint32_t l = 0; l < X.n3; ++l) {
          uint32_t x = X.at(i, j, l);
          if (!x) continue;
          uint32_t y = Y.at(s, j, l);
          if (y) acc = F.add(acc, F.mul(x, y));
        }
      M.at(i, s) = acc;
    }
  return M;
}

KruskalBound kruskal_lower_bound(const Field& F, const Tensor3& X,
                                 uint64_t cap) {
  require(!is_zero(X), "kruskal bound needs a nonzero tensor");
  Subspace ss = slice_space(F, X, 1);
  uint32_t d1 = ss.dim();
  double combos = double(d1) * std::log2(double(F.q()));
  require(combos <= std::log2(double(cap)) + 1e-9,
          "kruskal enumeration exceeds the configured cap");
  uint32_t best = UINT32_MAX;
  linalg::enumerate_projective(F, d1, [&](const std::vector<uint32_t>& c) {
    Mat N(X.n2, X.n3);
    for (uint32_t r = 0; r < d1; ++r) {
      if (!c[r]) continue;
      for (uint32_t t = 0; t < N.a.size(); ++t)
        N.a[t] = F.add(N.a[t], F.mul(c[r], ss.basis.at(r, t)));
    }
    best = std::min(best, linalg::rank(F, N));
    return best > 1;  // rank cannot drop below 1 on a nonzero span
  });
  KruskalBound kb;
  kb.min_slice_rank = best;
  kb.degenerate = d1 < X.n1;
  kb.value = d1 + best - 1;
  return kb;
}

}  // namespace rkt::tensor
