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

// Exact arithmetic over prime fields and the dense linear algebra used by the
// code constructions and the security checks.

#ifndef HSA_GF_H_
#define HSA_GF_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace hsa::gf {

using Residue = std::uint32_t;

// A prime field F_q. The modulus is limited to 2^31 so that a product of two
// residues fits in 64 bits before reduction.
class Field {
 public:
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

  // Throws InvalidArgument unless q is a prime not exceeding kMaxModulus.
  explicit Field(std::uint64_t q);

  std::uint64_t q() const { return q_; }

  Residue add(Residue a, Residue b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Residue>(s >= q_ ? s - q_ : s);
  }
  Residue sub(Residue a, Residue b) const {
    return static_cast<Residue>(a >= b ? a - b : q_ - (b - a));
  }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(std::uint64_t{a} * b % q_);
  }
  Residue neg(Residue a) const {
    return a == 0 ? 0 : static_cast<Residue>(q_ - a);
  }
  // Extended Euclid. Throws DivisionByZero for a == 0.
  Residue inv(Residue a) const;
  Residue div(Residue a, Residue b) const { return mul(a, inv(b)); }
  Residue pow(Residue base, std::uint64_t exp) const;

  // Maps any integer (negative values included) to its residue.
  Residue from_int(std::int64_t v) const;
  // Representative in (-q/2, q/2], handy for printing small coefficients.
  std::int64_t to_signed(Residue a) const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint64_t q_;
};

bool IsPrime(std::uint64_t q);

// Dense row-major matrix over a prime field.
class Matrix {
 public:
  // Empty 0 x 0 matrix over F_2, a placeholder for later assignment.
  Matrix() : Matrix(Field(2), 0, 0) {}
  Matrix(const Field& field, std::size_t rows, std::size_t cols);
  // Entries are reduced mod q, so negative literals are accepted.
  static Matrix FromRows(const Field& field,
                         const std::vector<std::vector<std::int64_t>>& rows);
  static Matrix Identity(const Field& field, std::size_t size);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Residue operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  Residue& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  // Stores v mod q.
  void set(std::size_t r, std::size_t c, std::int64_t v) {
    entries_[r * cols_ + c] = field_.from_int(v);
  }

  std::span<const Residue> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const Residue> entries() const { return entries_; }

  Matrix transpose() const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  bool is_zero() const;

  std::vector<std::vector<std::int64_t>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> entries_;
};

// Throws ShapeError on mismatched dimensions or fields.
Matrix Multiply(const Matrix& a, const Matrix& b);
Matrix Add(const Matrix& a, const Matrix& b);
Matrix Scale(const Matrix& a, Residue s);
// Vertical / horizontal concatenation. Empty operands (0 rows or 0 columns)
// are allowed as long as the shared dimension agrees or the operand is empty.
Matrix VStack(const Matrix& top, const Matrix& bottom);
Matrix HStack(const Matrix& left, const Matrix& right);

// Throws SingularMatrix (or ShapeError when not square).
Matrix Inverse(const Matrix& m);
Residue Determinant(const Matrix& m);
std::size_t Rank(const Matrix& m);
// Columns form a basis of {x : m x = 0}; width is cols - rank.
Matrix RightNullspace(const Matrix& m);
// Reduced row echelon form. Pivots are chosen as the first row (top-down)
// holding a nonzero entry in the leftmost remaining column.
Matrix RowReduce(const Matrix& m, std::size_t* rank = nullptr);

// True iff every rows x rows minor is nonsingular. Exhaustive over all
// C(cols, rows) column choices. Throws ShapeError if rows > cols.
bool IsMds(const Matrix& m);

// Entry (i, j) = 1 / (alpha_i + beta_j). Throws CauchyDegenerate when the
// alphas or betas repeat or a denominator vanishes.
Matrix Cauchy(std::span<const Residue> alphas, std::span<const Residue> betas,
              const Field& field);

// K x K matrix whose row r is the first row cyclically shifted right by r.
Matrix Circulant(std::span<const Residue> first_row, const Field& field);

// Smallest generator of the multiplicative group.
Residue Generator(const Field& field);
// A primitive t-th root of unity. Throws NoSuchRoot unless t divides q - 1.
Residue RootOfUnity(const Field& field, std::uint64_t t);

}  // namespace hsa::gf

#endif  // HSA_GF_H_
