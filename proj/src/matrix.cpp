#include "seqlab/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace seqlab {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("Matrix: negative dimension");
  }
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("Matrix: data length does not match shape " +
                                shape_str());
  }
}

Matrix Matrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) {
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    }
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

void Matrix::fill(double v) {
  for (double& x : data_) x = v;
}

bool Matrix::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::string Matrix::shape_str() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.data()[i] != b.data()[i]) return false;
  }
  return true;
}

namespace {

void check_matmul(int ac, int br, const char* who) {
  if (ac != br) {
    throw std::invalid_argument(std::string(who) + ": inner dimensions differ");
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a.cols(), b.rows(), "matmul");
  Matrix c(a.rows(), b.cols());
  matmul_acc(a, b, c);
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  check_matmul(a.rows(), b.rows(), "matmul_tn");
  Matrix c(a.cols(), b.cols());
  matmul_tn_acc(a, b, c);
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  check_matmul(a.cols(), b.cols(), "matmul_nt");
  Matrix c(a.rows(), b.rows());
  matmul_nt_acc(a, b, c);
  return c;
}

// i-k-j loop order keeps the inner loop contiguous in both b and c.
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  check_matmul(a.cols(), b.rows(), "matmul_acc");
  const int n = a.rows(), k = a.cols(), m = b.cols();
  for (int i = 0; i < n; ++i) {
    const double* arow = a.data() + static_cast<std::size_t>(i) * k;
    double* crow = c.data() + static_cast<std::size_t>(i) * m;
    for (int p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.data() + static_cast<std::size_t>(p) * m;
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  check_matmul(a.rows(), b.rows(), "matmul_tn_acc");
  const int n = a.cols(), k = a.rows(), m = b.cols();
  for (int p = 0; p < k; ++p) {
    const double* arow = a.data() + static_cast<std::size_t>(p) * n;
    const double* brow = b.data() + static_cast<std::size_t>(p) * m;
    for (int i = 0; i < n; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c.data() + static_cast<std::size_t>(i) * m;
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  check_matmul(a.cols(), b.cols(), "matmul_nt_acc");
  const int n = a.rows(), k = a.cols(), m = b.rows();
  for (int i = 0; i < n; ++i) {
    const double* arow = a.data() + static_cast<std::size_t>(i) * k;
    double* crow = c.data() + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) {
      const double* brow = b.data() + static_cast<std::size_t>(j) * k;
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += arow[p] * brow[p];
      crow[j] += s;
    }
  }
}

}  // namespace seqlab
