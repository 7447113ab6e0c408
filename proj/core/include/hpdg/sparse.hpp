#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

namespace hpdg {

using Vec = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

// Compressed-row sparse operator: Eigen storage plus a symmetry tag. The tag
// is advisory; symmetry_defect() measures the actual max |A_ij - A_ji| so
// callers can verify the claim.
class SparseOperator {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseOperator() = default;
  explicit SparseOperator(Storage m, bool symmetric = false)
      : m_(std::move(m)), symmetric_(symmetric) {
    m_.makeCompressed();
  }

  static SparseOperator from_triplets(int rows, int cols, const std::vector<Triplet>& t,
                                      bool symmetric = false);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  std::int64_t nonzeros() const { return m_.nonZeros(); }
  bool is_symmetric() const { return symmetric_; }
  double symmetry_defect() const;
  double max_abs() const;

  void apply(const Vec& x, Vec& y) const { y.noalias() = m_ * x; }
  Vec apply(const Vec& x) const { return m_ * x; }

  const Storage& matrix() const { return m_; }
  Storage& matrix() { return m_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }

 private:
  Storage m_;
  bool symmetric_ = false;
};

// Matrix Market export, coordinate real general with 1-based indices.
void write_matrix_market(const SparseOperator& A, const std::string& path);
// Matrix Market dense array format for a vector.
void write_matrix_market_vector(const Vec& v, const std::string& path);

}  // namespace hpdg
