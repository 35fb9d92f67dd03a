#pragma once

#include <cstddef>
#include <vector>

#include "qf/ring.hpp"

namespace qf {

/// Column vector over a ring, entries indexed 0..dim-1.
using Vec = std::vector<Elem>;

/// Dense row-major matrix over a ring.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, Elem fill = 0)
      : rows(r), cols(c), a(r * c, fill) {}

  Elem& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Elem& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  Vec col(std::size_t c) const {
    Vec v(rows);
    for (std::size_t r = 0; r < rows; ++r) v[r] = at(r, c);
    return v;
  }
  void set_col(std::size_t c, const Vec& v) {
    for (std::size_t r = 0; r < rows; ++r) at(r, c) = v[r];
  }

  friend bool operator==(const Mat&, const Mat&) = default;
};

Mat mat_zero(const Ring& R, std::size_t rows, std::size_t cols);
Mat mat_identity(const Ring& R, std::size_t n);
Mat mat_add(const Ring& R, const Mat& x, const Mat& y);
Mat mat_sub(const Ring& R, const Mat& x, const Mat& y);
Mat mat_neg(const Ring& R, const Mat& x);
Mat mat_mul(const Ring& R, const Mat& x, const Mat& y);
/// Entrywise left scalar multiple s * x.
Mat mat_scale_left(const Ring& R, Elem s, const Mat& x);
/// Entrywise right scalar multiple x * s.
Mat mat_scale_right(const Ring& R, const Mat& x, Elem s);
/// sigma-transpose: result(i,j) = sigma[x(j,i)].
Mat sigma_transpose(const Mat& x, const std::vector<Elem>& sigma);
/// Horizontal/vertical/diagonal blocks.
Mat mat_hcat(const Mat& x, const Mat& y);
Mat mat_vcat(const Mat& x, const Mat& y);
Mat mat_diag(const Ring& R, const Mat& x, const Mat& y);
/// Contiguous submatrix.
Mat mat_block(const Mat& x, std::size_t r0, std::size_t c0, std::size_t rows,
              std::size_t cols);
/// Matrix with the given columns.
Mat mat_from_cols(std::size_t rows, const std::vector<Vec>& cols);
/// Outer product column * row (row given as a Vec of length cols).
Mat mat_outer(const Ring& R, const Vec& col, const Vec& row);

Vec vec_zero(const Ring& R, std::size_t n);
Vec vec_add(const Ring& R, const Vec& x, const Vec& y);
Vec vec_sub(const Ring& R, const Vec& x, const Vec& y);
Vec vec_neg(const Ring& R, const Vec& x);
/// Matrix-vector product.
Vec mat_vec(const Ring& R, const Mat& m, const Vec& x);
/// Row-vector-matrix product (x as a row).
Vec vec_mat(const Ring& R, const Vec& x, const Mat& m);
/// Right scalar multiple x * s.
Vec vec_scale_right(const Ring& R, const Vec& x, Elem s);
/// sigma-twisted dot product: sum_i sigma[y_i] * x_i.
Elem sigma_dot(const Ring& R, const Vec& y, const Vec& x,
               const std::vector<Elem>& sigma);
bool vec_is_zero(const Ring& R, const Vec& x);
/// Concatenation.
Vec vec_cat(const Vec& x, const Vec& y);

struct VecHash {
  std::size_t operator()(const Vec& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Elem e : v) {
      h ^= e;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct MatHash {
  std::size_t operator()(const Mat& m) const {
    VecHash vh;
    std::size_t h = vh(m.a);
    h ^= m.rows + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= m.cols + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace qf
