#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/ff.hpp"

namespace polystring {

// Dense square matrix over a fixed Fq. Rows are stored contiguously; the
// field object must outlive every matrix built on it.
class Mat {
 public:
  Mat(const Fq& F, std::uint32_t n) : F_(&F), n_(n), a_(std::size_t{n} * n, 0) {}

  static Mat identity(const Fq& F, std::uint32_t n) {
    Mat m(F, n);
    for (std::uint32_t i = 0; i < n; ++i) m.at(i, i) = F.one();
    return m;
  }

  // Entries given row by row as integers, reduced mod p.
  static Mat from_ints(const Fq& F, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    Mat m(F, static_cast<std::uint32_t>(rows.size()));
    std::uint32_t i = 0;
    for (auto& row : rows) {
      if (row.size() != rows.size()) throw BadFormat("matrix rows must form a square");
      std::uint32_t j = 0;
      for (std::int64_t v : row) m.at(i, j++) = F.from_int(v);
      ++i;
    }
    return m;
  }

  const Fq& field() const { return *F_; }
  std::uint32_t dim() const { return n_; }

  Fq::Elt& at(std::uint32_t i, std::uint32_t j) { return a_[std::size_t{i} * n_ + j]; }
  Fq::Elt at(std::uint32_t i, std::uint32_t j) const { return a_[std::size_t{i} * n_ + j]; }

  bool operator==(const Mat& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator*(const Mat& o) const {
    check_compat(o);
    Mat r(*F_, n_);
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t k = 0; k < n_; ++k) {
        Fq::Elt v = at(i, k);
        if (v == 0) continue;
        for (std::uint32_t j = 0; j < n_; ++j)
          r.at(i, j) = F_->add(r.at(i, j), F_->mul(v, o.at(k, j)));
      }
    return r;
  }

  Mat operator+(const Mat& o) const {
    check_compat(o);
    Mat r(*F_, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->add(a_[i], o.a_[i]);
    return r;
  }

  Mat operator-() const {
    Mat r(*F_, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->neg(a_[i]);
    return r;
  }

  Mat scaled(Fq::Elt c) const {
    Mat r(*F_, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->mul(c, a_[i]);
    return r;
  }

  Mat transpose() const {
    Mat r(*F_, n_);
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  Fq::Elt det() const {
    Mat m(*this);
    Fq::Elt d = F_->one();
    for (std::uint32_t c = 0; c < n_; ++c) {
      std::uint32_t pivot = c;
      while (pivot < n_ && m.at(pivot, c) == 0) ++pivot;
      if (pivot == n_) return F_->zero();
      if (pivot != c) {
        for (std::uint32_t j = 0; j < n_; ++j) std::swap(m.at(pivot, j), m.at(c, j));
        d = F_->neg(d);
      }
      d = F_->mul(d, m.at(c, c));
      Fq::Elt inv = F_->inv(m.at(c, c));
      for (std::uint32_t r = c + 1; r < n_; ++r) {
        Fq::Elt f = F_->mul(m.at(r, c), inv);
        if (f == 0) continue;
        for (std::uint32_t j = c; j < n_; ++j)
          m.at(r, j) = F_->sub(m.at(r, j), F_->mul(f, m.at(c, j)));
      }
    }
    return d;
  }

  Mat inverse() const {
    Mat m(*this);
    Mat r = identity(*F_, n_);
    for (std::uint32_t c = 0; c < n_; ++c) {
      std::uint32_t pivot = c;
      while (pivot < n_ && m.at(pivot, c) == 0) ++pivot;
      if (pivot == n_) throw Singular("matrix is singular");
      if (pivot != c)
        for (std::uint32_t j = 0; j < n_; ++j) {
          std::swap(m.at(pivot, j), m.at(c, j));
          std::swap(r.at(pivot, j), r.at(c, j));
        }
      Fq::Elt inv = F_->inv(m.at(c, c));
      for (std::uint32_t j = 0; j < n_; ++j) {
        m.at(c, j) = F_->mul(inv, m.at(c, j));
        r.at(c, j) = F_->mul(inv, r.at(c, j));
      }
      for (std::uint32_t row = 0; row < n_; ++row) {
        if (row == c) continue;
        Fq::Elt f = m.at(row, c);
        if (f == 0) continue;
        for (std::uint32_t j = 0; j < n_; ++j) {
          m.at(row, j) = F_->sub(m.at(row, j), F_->mul(f, m.at(c, j)));
          r.at(row, j) = F_->sub(r.at(row, j), F_->mul(f, r.at(c, j)));
        }
      }
    }
    return r;
  }

  Mat pow(std::int64_t e) const {
    Mat base = e < 0 ? inverse() : *this;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    Mat r = identity(*F_, n_);
    while (n) {
      if (n & 1) r = r * base;
      base = base * base;
      n >>= 1;
    }
    return r;
  }

  bool is_identity() const {
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t j = 0; j < n_; ++j)
        if (at(i, j) != (i == j ? F_->one() : F_->zero())) return false;
    return true;
  }

  bool is_scalar() const {
    Fq::Elt d = at(0, 0);
    for (std::uint32_t i = 0; i < n_; ++i)
      for (std::uint32_t j = 0; j < n_; ++j)
        if (at(i, j) != (i == j ? d : F_->zero())) return false;
    return true;
  }

  // Column vector action v -> M v.
  std::vector<Fq::Elt> apply(const std::vector<Fq::Elt>& v) const {
    if (v.size() != n_) throw DegreeMismatch("vector length does not match matrix dimension");
    std::vector<Fq::Elt> out(n_, 0);
    for (std::uint32_t i = 0; i < n_; ++i) {
      Fq::Elt s = 0;
      for (std::uint32_t j = 0; j < n_; ++j) s = F_->add(s, F_->mul(at(i, j), v[j]));
      out[i] = s;
    }
    return out;
  }

  const std::vector<Fq::Elt>& entries() const { return a_; }

 private:
  void check_compat(const Mat& o) const {
    if (n_ != o.n_ || !F_->same_as(*o.F_))
      throw DegreeMismatch("matrices live in different spaces");
  }

  const Fq* F_;
  std::uint32_t n_;
  std::vector<Fq::Elt> a_;
};

// [A 0; 0 B] for equal-sized blocks.
inline Mat block_diag(const Mat& A, const Mat& B) {
  std::uint32_t n = A.dim();
  if (B.dim() != n || !A.field().same_as(B.field()))
    throw DegreeMismatch("blocks must match in size and field");
  Mat r(A.field(), 2 * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      r.at(i, j) = A.at(i, j);
      r.at(n + i, n + j) = B.at(i, j);
    }
  return r;
}

// [0 A; B 0] for equal-sized blocks.
inline Mat block_antidiag(const Mat& A, const Mat& B) {
  std::uint32_t n = A.dim();
  if (B.dim() != n || !A.field().same_as(B.field()))
    throw DegreeMismatch("blocks must match in size and field");
  Mat r(A.field(), 2 * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      r.at(i, n + j) = A.at(i, j);
      r.at(n + i, j) = B.at(i, j);
    }
  return r;
}

// Splits a 2n x 2n matrix into blocks if it is block diagonal or block
// antidiagonal; throws NotBlockShaped otherwise. `top` is the nonzero block
// read from rows 0..n-1.
struct BlockShape {
  Mat top, bottom;
  bool anti;
};

// Row rank by Gaussian elimination.
inline std::uint32_t mat_rank(Mat m) {
  const Fq& F = m.field();
  std::uint32_t n = m.dim(), rank = 0;
  for (std::uint32_t c = 0; c < n && rank < n; ++c) {
    std::uint32_t pivot = rank;
    while (pivot < n && m.at(pivot, c) == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != rank)
      for (std::uint32_t j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
    Fq::Elt inv = F.inv(m.at(rank, c));
    for (std::uint32_t r = 0; r < n; ++r) {
      if (r == rank) continue;
      Fq::Elt f = F.mul(m.at(r, c), inv);
      if (f == 0) continue;
      for (std::uint32_t j = c; j < n; ++j)
        m.at(r, j) = F.sub(m.at(r, j), F.mul(f, m.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

// Dimension of the space of vectors fixed by M: dim ker(M - I).
inline std::uint32_t fixed_space_dim(const Mat& M) {
  Mat shifted = M + (-Mat::identity(M.field(), M.dim()));
  return M.dim() - mat_rank(shifted);
}

// Eigenvalues of a 2x2 matrix, read in the quadratic extension, together
// with their multiplicative orders.  Serves as an independent oracle for
// the order of a product of generators whose square has this matrix as a
// block.
struct EigenOrders {
  Fq::Elt eig1 = 0, eig2 = 0;          // elements of the extension field
  std::uint64_t ord1 = 0, ord2 = 0;
};

inline EigenOrders quadratic_eigen_orders(const Mat& Y, const Fq& ext) {
  if (Y.dim() != 2) throw BadFormat("eigenvalue oracle expects a 2x2 matrix");
  const Fq& F = Y.field();
  if (F.p() == 2) throw BadFormat("eigenvalue oracle requires odd characteristic");
  if (Y.det() == 0) throw Singular("zero eigenvalue");
  Fq::Elt tr = F.add(Y.at(0, 0), Y.at(1, 1));
  Fq::Elt disc = F.sub(F.mul(tr, tr), F.mul(F.from_int(4), Y.det()));
  Fq::Elt tr2 = embed(F, ext, tr);
  Fq::Elt disc2 = embed(F, ext, disc);
  auto root = ext.sqrt(disc2);
  if (!root) throw Error("discriminant is not a square in the quadratic extension");
  Fq::Elt half = ext.inv(ext.from_int(2));
  EigenOrders out;
  out.eig1 = ext.mul(ext.add(tr2, *root), half);
  out.eig2 = ext.mul(ext.sub(tr2, *root), half);
  out.ord1 = ext.order(out.eig1);
  out.ord2 = ext.order(out.eig2);
  return out;
}

inline BlockShape split_blocks(const Mat& M) {
  std::uint32_t d = M.dim();
  if (d % 2) throw NotBlockShaped("odd dimension");
  std::uint32_t n = d / 2;
  bool diag_ok = true, anti_ok = true;
  for (std::uint32_t i = 0; i < n && (diag_ok || anti_ok); ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      if (M.at(i, n + j) != 0 || M.at(n + i, j) != 0) diag_ok = false;
      if (M.at(i, j) != 0 || M.at(n + i, n + j) != 0) anti_ok = false;
    }
  Mat top(M.field(), n), bottom(M.field(), n);
  if (diag_ok) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        top.at(i, j) = M.at(i, j);
        bottom.at(i, j) = M.at(n + i, n + j);
      }
    return {top, bottom, false};
  }
  if (anti_ok) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        top.at(i, j) = M.at(i, n + j);
        bottom.at(i, j) = M.at(n + i, j);
      }
    return {top, bottom, true};
  }
  throw NotBlockShaped("matrix is neither block diagonal nor block antidiagonal");
}

}  // namespace polystring
