/*
 * Copyright 2026 The HSA Lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hsa/gf.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "hsa/error.h"

namespace hsa {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kCauchyDegenerate: return "CauchyDegenerate";
    case ErrorCode::kNoSuchRoot: return "NoSuchRoot";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidTopology: return "InvalidTopology";
    case ErrorCode::kFieldTooSmall: return "FieldTooSmall";
    case ErrorCode::kInfeasibleParameters: return "InfeasibleParameters";
    case ErrorCode::kConstructionFailed: return "ConstructionFailed";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kTooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace hsa

namespace hsa::gf {

namespace {

void RequireSameField(const Matrix& a, const Matrix& b, const char* op) {
  if (!(a.field() == b.field())) {
    throw Error(ErrorCode::kShapeError,
                std::string(op) + ": operands live in different fields");
  }
}

std::string Dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

bool IsPrime(std::uint64_t q) {
  if (q < 2) return false;
  if (q < 4) return true;
  if (q % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= q; d += 2) {
    if (q % d == 0) return false;
  }
  return true;
}

Field::Field(std::uint64_t q) : q_(q) {
  if (q > kMaxModulus || !IsPrime(q)) {
    throw Error(ErrorCode::kInvalidArgument,
                "field modulus " + std::to_string(q) + " is not a prime <= 2^31");
  }
}

Residue Field::inv(Residue a) const {
  if (a % q_ == 0) {
    throw Error(ErrorCode::kDivisionByZero, "inverse of zero in F_" +
                                                std::to_string(q_));
  }
  std::int64_t r0 = static_cast<std::int64_t>(q_), r1 = a;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t quot = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - quot * r1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - quot * t1);
  }
  return from_int(t0);
}

Residue Field::pow(Residue base, std::uint64_t exp) const {
  Residue result = static_cast<Residue>(1 % q_);
  Residue b = static_cast<Residue>(base % q_);
  while (exp > 0) {
    if (exp & 1) result = mul(result, b);
    b = mul(b, b);
    exp >>= 1;
  }
  return result;
}

Residue Field::from_int(std::int64_t v) const {
  std::int64_t q = static_cast<std::int64_t>(q_);
  std::int64_t r = v % q;
  return static_cast<Residue>(r < 0 ? r + q : r);
}

std::int64_t Field::to_signed(Residue a) const {
  return a > q_ / 2 ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(q_)
                    : static_cast<std::int64_t>(a);
}

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

Matrix Matrix::FromRows(const Field& field,
                        const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw Error(ErrorCode::kShapeError, "ragged row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Matrix Matrix::Identity(const Field& field, std::size_t size) {
  Matrix m(field, size, size);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(field_, rows_, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] >= cols_) {
      throw Error(ErrorCode::kShapeError, "column index out of range");
    }
    for (std::size_t r = 0; r < rows_; ++r) out(r, k) = (*this)(r, cols[k]);
  }
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(field_, rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= rows_) {
      throw Error(ErrorCode::kShapeError, "row index out of range");
    }
    std::copy_n(entries_.begin() + rows[k] * cols_, cols_,
                out.entries_.begin() + k * cols_);
  }
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Residue e) { return e == 0; });
}

std::vector<std::vector<std::int64_t>> Matrix::to_rows() const {
  std::vector<std::vector<std::int64_t>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r].assign(entries_.begin() + r * cols_,
                  entries_.begin() + (r + 1) * cols_);
  }
  return out;
}

Matrix Multiply(const Matrix& a, const Matrix& b) {
  RequireSameField(a, b, "Multiply");
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kShapeError,
                "Multiply: " + Dims(a) + " times " + Dims(b));
  }
  const Field& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Residue x = a(r, k);
      if (x == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) {
        out(r, c) = f.add(out(r, c), f.mul(x, b(k, c)));
      }
    }
  }
  return out;
}

Matrix Add(const Matrix& a, const Matrix& b) {
  RequireSameField(a, b, "Add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kShapeError, "Add: " + Dims(a) + " plus " + Dims(b));
  }
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      out(r, c) = a.field().add(a(r, c), b(r, c));
    }
  }
  return out;
}

Matrix Scale(const Matrix& a, Residue s) {
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      out(r, c) = a.field().mul(a(r, c), s);
    }
  }
  return out;
}

Matrix VStack(const Matrix& top, const Matrix& bottom) {
  RequireSameField(top, bottom, "VStack");
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) {
    throw Error(ErrorCode::kShapeError,
                "VStack: " + Dims(top) + " over " + Dims(bottom));
  }
  Matrix out(top.field(), top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r) {
    for (std::size_t c = 0; c < top.cols(); ++c) out(r, c) = top(r, c);
  }
  for (std::size_t r = 0; r < bottom.rows(); ++r) {
    for (std::size_t c = 0; c < top.cols(); ++c) {
      out(top.rows() + r, c) = bottom(r, c);
    }
  }
  return out;
}

Matrix HStack(const Matrix& left, const Matrix& right) {
  RequireSameField(left, right, "HStack");
  if (left.cols() == 0) return right;
  if (right.cols() == 0) return left;
  if (left.rows() != right.rows()) {
    throw Error(ErrorCode::kShapeError,
                "HStack: " + Dims(left) + " beside " + Dims(right));
  }
  Matrix out(left.field(), left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    for (std::size_t c = 0; c < left.cols(); ++c) out(r, c) = left(r, c);
    for (std::size_t c = 0; c < right.cols(); ++c) {
      out(r, left.cols() + c) = right(r, c);
    }
  }
  return out;
}

Matrix RowReduce(const Matrix& m, std::size_t* rank) {
  const Field& f = m.field();
  Matrix a = m;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != pivot_row) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        std::swap(a(sel, c), a(pivot_row, c));
      }
    }
    Residue scale = f.inv(a(pivot_row, col));
    for (std::size_t c = col; c < a.cols(); ++c) {
      a(pivot_row, c) = f.mul(a(pivot_row, c), scale);
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == pivot_row || a(r, col) == 0) continue;
      Residue factor = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) {
        a(r, c) = f.sub(a(r, c), f.mul(factor, a(pivot_row, c)));
      }
    }
    ++pivot_row;
  }
  if (rank != nullptr) *rank = pivot_row;
  return a;
}

std::size_t Rank(const Matrix& m) {
  std::size_t rank = 0;
  RowReduce(m, &rank);
  return rank;
}

Residue Determinant(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeError, "Determinant of " + Dims(m));
  }
  const Field& f = m.field();
  Matrix a = m;
  const std::size_t n = a.rows();
  Residue det = static_cast<Residue>(1 % f.q());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a(sel, col) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(sel, c), a(col, c));
      det = f.neg(det);
    }
    det = f.mul(det, a(col, col));
    Residue pivot_inv = f.inv(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      Residue factor = f.mul(a(r, col), pivot_inv);
      for (std::size_t c = col; c < n; ++c) {
        a(r, c) = f.sub(a(r, c), f.mul(factor, a(col, c)));
      }
    }
  }
  return det;
}

Matrix Inverse(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeError, "Inverse of " + Dims(m));
  }
  const std::size_t n = m.rows();
  std::size_t rank = 0;
  Matrix reduced = RowReduce(HStack(m, Matrix::Identity(m.field(), n)), &rank);
  for (std::size_t i = 0; i < n; ++i) {
    if (reduced(i, i) != 1) {
      throw Error(ErrorCode::kSingularMatrix,
                  "matrix " + Dims(m) + " is singular");
    }
  }
  std::vector<std::size_t> right(n);
  std::iota(right.begin(), right.end(), n);
  return reduced.select_columns(right);
}

Matrix RightNullspace(const Matrix& m) {
  const Field& f = m.field();
  std::size_t rank = 0;
  Matrix rref = RowReduce(m, &rank);
  std::vector<std::size_t> pivot_cols;
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t r = 0, c = 0; r < rank; ++r) {
    while (rref(r, c) == 0) ++c;
    pivot_cols.push_back(c);
    is_pivot[c] = true;
  }
  Matrix basis(f, m.cols(), m.cols() - rank);
  std::size_t k = 0;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(free, k) = 1;
    for (std::size_t r = 0; r < rank; ++r) {
      basis(pivot_cols[r], k) = f.neg(rref(r, free));
    }
    ++k;
  }
  return basis;
}

bool IsMds(const Matrix& m) {
  const std::size_t k = m.rows();
  const std::size_t n = m.cols();
  if (k > n) {
    throw Error(ErrorCode::kShapeError, "IsMds needs rows <= cols, got " +
                                            Dims(m));
  }
  if (k == 0) return true;
  std::vector<std::size_t> choice(k);
  std::iota(choice.begin(), choice.end(), 0);
  while (true) {
    if (Determinant(m.select_columns(choice)) == 0) return false;
    // Advance to the next k-combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && choice[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++choice[i - 1];
    for (std::size_t j = i; j < k; ++j) choice[j] = choice[j - 1] + 1;
  }
}

Matrix Cauchy(std::span<const Residue> alphas, std::span<const Residue> betas,
              const Field& field) {
  auto distinct = [&](std::span<const Residue> xs) {
    std::vector<Residue> v;
    for (Residue x : xs) v.push_back(static_cast<Residue>(x % field.q()));
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!distinct(alphas) || !distinct(betas)) {
    throw Error(ErrorCode::kCauchyDegenerate, "repeated Cauchy parameter");
  }
  Matrix out(field, alphas.size(), betas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = 0; j < betas.size(); ++j) {
      Residue denom = field.add(field.from_int(alphas[i]),
                                field.from_int(betas[j]));
      if (denom == 0) {
        throw Error(ErrorCode::kCauchyDegenerate,
                    "alpha_" + std::to_string(i + 1) + " + beta_" +
                        std::to_string(j + 1) + " = 0");
      }
      out(i, j) = field.inv(denom);
    }
  }
  return out;
}

Matrix Circulant(std::span<const Residue> first_row, const Field& field) {
  const std::size_t k = first_row.size();
  Matrix out(field, k, k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      out(r, (c + r) % k) = static_cast<Residue>(first_row[c] % field.q());
    }
  }
  return out;
}

Residue Generator(const Field& field) {
  const std::uint64_t order = field.q() - 1;
  if (order == 1) return 1;
  std::vector<std::uint64_t> prime_factors;
  std::uint64_t rest = order;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    prime_factors.push_back(p);
    while (rest % p == 0) rest /= p;
  }
  if (rest > 1) prime_factors.push_back(rest);
  for (Residue g = 2; g < field.q(); ++g) {
    bool generates = std::all_of(
        prime_factors.begin(), prime_factors.end(),
        [&](std::uint64_t p) { return field.pow(g, order / p) != 1; });
    if (generates) return g;
  }
  throw Error(ErrorCode::kNoSuchRoot, "no generator found");
}

Residue RootOfUnity(const Field& field, std::uint64_t t) {
  if (t == 0 || (field.q() - 1) % t != 0) {
    throw Error(ErrorCode::kNoSuchRoot,
                std::to_string(t) + " does not divide q - 1 = " +
                    std::to_string(field.q() - 1));
  }
  return field.pow(Generator(field), (field.q() - 1) / t);
}

}  // namespace hsa::gf
