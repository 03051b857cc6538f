#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace seqlab {

// Dense row-major matrix of doubles. The single numeric carrier for the
// whole library; row vectors are 1 x n matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> data);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  void fill(double v);
  bool all_finite() const;
  std::string shape_str() const;  // e.g. "3x4"

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

bool operator==(const Matrix& a, const Matrix& b);

Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // transpose(a) * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * transpose(b)

// c += a * b and friends, used by the reverse sweep.
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& c);

}  // namespace seqlab
