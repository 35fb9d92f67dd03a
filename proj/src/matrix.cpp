#include "qf/matrix.hpp"

namespace qf {

namespace {
void require_same_shape(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw ShapeMismatch("matrix shapes differ");
}
}  // namespace

Mat mat_zero(const Ring& R, std::size_t rows, std::size_t cols) {
  return Mat(rows, cols, R.zero());
}

Mat mat_identity(const Ring& R, std::size_t n) {
  Mat m(n, n, R.zero());
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = R.one();
  return m;
}

Mat mat_add(const Ring& R, const Mat& x, const Mat& y) {
  require_same_shape(x, y);
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = R.add(x.a[i], y.a[i]);
  return out;
}

Mat mat_sub(const Ring& R, const Mat& x, const Mat& y) {
  require_same_shape(x, y);
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = R.sub(x.a[i], y.a[i]);
  return out;
}

Mat mat_neg(const Ring& R, const Mat& x) {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = R.neg(x.a[i]);
  return out;
}

Mat mat_mul(const Ring& R, const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw ShapeMismatch("matrix product shapes differ");
  Mat out(x.rows, y.cols, R.zero());
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l) {
      Elem xi = x.at(i, l);
      if (xi == R.zero()) continue;
      for (std::size_t j = 0; j < y.cols; ++j)
        out.at(i, j) = R.add(out.at(i, j), R.mul(xi, y.at(l, j)));
    }
  return out;
}

Mat mat_scale_left(const Ring& R, Elem s, const Mat& x) {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = R.mul(s, x.a[i]);
  return out;
}

Mat mat_scale_right(const Ring& R, const Mat& x, Elem s) {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = R.mul(x.a[i], s);
  return out;
}

Mat sigma_transpose(const Mat& x, const std::vector<Elem>& sigma) {
  Mat out(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j)
      out.at(j, i) = sigma.at(x.at(i, j));
  return out;
}

Mat mat_hcat(const Mat& x, const Mat& y) {
  if (x.rows != y.rows) throw ShapeMismatch("hcat row counts differ");
  Mat out(x.rows, x.cols + y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j);
    for (std::size_t j = 0; j < y.cols; ++j) out.at(i, x.cols + j) = y.at(i, j);
  }
  return out;
}

Mat mat_vcat(const Mat& x, const Mat& y) {
  if (x.cols != y.cols) throw ShapeMismatch("vcat column counts differ");
  Mat out(x.rows + y.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j);
  for (std::size_t i = 0; i < y.rows; ++i)
    for (std::size_t j = 0; j < y.cols; ++j) out.at(x.rows + i, j) = y.at(i, j);
  return out;
}

Mat mat_diag(const Ring& R, const Mat& x, const Mat& y) {
  Mat out(x.rows + y.rows, x.cols + y.cols, R.zero());
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j);
  for (std::size_t i = 0; i < y.rows; ++i)
    for (std::size_t j = 0; j < y.cols; ++j)
      out.at(x.rows + i, x.cols + j) = y.at(i, j);
  return out;
}

Mat mat_block(const Mat& x, std::size_t r0, std::size_t c0, std::size_t rows,
              std::size_t cols) {
  if (r0 + rows > x.rows || c0 + cols > x.cols)
    throw ShapeMismatch("block exceeds matrix");
  Mat out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = x.at(r0 + i, c0 + j);
  return out;
}

Mat mat_from_cols(std::size_t rows, const std::vector<Vec>& cols) {
  Mat out(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw ShapeMismatch("column length differs");
    out.set_col(j, cols[j]);
  }
  return out;
}

Mat mat_outer(const Ring& R, const Vec& col, const Vec& row) {
  Mat out(col.size(), row.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    for (std::size_t j = 0; j < row.size(); ++j)
      out.at(i, j) = R.mul(col[i], row[j]);
  return out;
}

Vec vec_zero(const Ring& R, std::size_t n) {
  return Vec(n, R.zero());
}

Vec vec_add(const Ring& R, const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw ShapeMismatch("vector lengths differ");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = R.add(x[i], y[i]);
  return out;
}

Vec vec_sub(const Ring& R, const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw ShapeMismatch("vector lengths differ");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = R.sub(x[i], y[i]);
  return out;
}

Vec vec_neg(const Ring& R, const Vec& x) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = R.neg(x[i]);
  return out;
}

Vec mat_vec(const Ring& R, const Mat& m, const Vec& x) {
  if (m.cols != x.size()) throw ShapeMismatch("matrix-vector shapes differ");
  Vec out(m.rows, R.zero());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      out[i] = R.add(out[i], R.mul(m.at(i, j), x[j]));
  return out;
}

Vec vec_mat(const Ring& R, const Vec& x, const Mat& m) {
  if (m.rows != x.size()) throw ShapeMismatch("vector-matrix shapes differ");
  Vec out(m.cols, R.zero());
  for (std::size_t j = 0; j < m.cols; ++j)
    for (std::size_t i = 0; i < m.rows; ++i)
      out[j] = R.add(out[j], R.mul(x[i], m.at(i, j)));
  return out;
}

Vec vec_scale_right(const Ring& R, const Vec& x, Elem s) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = R.mul(x[i], s);
  return out;
}

Elem sigma_dot(const Ring& R, const Vec& y, const Vec& x,
               const std::vector<Elem>& sigma) {
  if (x.size() != y.size()) throw ShapeMismatch("vector lengths differ");
  Elem out = R.zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    out = R.add(out, R.mul(sigma.at(y[i]), x[i]));
  return out;
}

bool vec_is_zero(const Ring& R, const Vec& x) {
  for (Elem e : x)
    if (e != R.zero()) return false;
  return true;
}

Vec vec_cat(const Vec& x, const Vec& y) {
  Vec out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

}  // namespace qf
