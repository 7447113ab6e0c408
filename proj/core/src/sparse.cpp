#include "hpdg/sparse.hpp"

#include <cstdio>
#include <stdexcept>

namespace hpdg {

SparseOperator SparseOperator::from_triplets(int rows, int cols, const std::vector<Triplet>& t,
                                             bool symmetric) {
  Storage m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return SparseOperator(std::move(m), symmetric);
}

double SparseOperator::symmetry_defect() const {
  if (rows() != cols()) throw std::logic_error("symmetry_defect: operator is not square");
  Storage diff = Storage(m_ - Storage(m_.transpose()));
  double d = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Storage::InnerIterator it(diff, k); it; ++it) d = std::max(d, std::abs(it.value()));
  return d;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < m_.outerSize(); ++k)
    for (Storage::InnerIterator it(m_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

void write_matrix_market(const SparseOperator& A, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_matrix_market: cannot open " + path);
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%d %d %lld\n", A.rows(), A.cols(), static_cast<long long>(A.nonzeros()));
  const auto& m = A.matrix();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseOperator::Storage::InnerIterator it(m, k); it; ++it)
      std::fprintf(f, "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                   static_cast<int>(it.col()) + 1, it.value());
  std::fclose(f);
}

void write_matrix_market_vector(const Vec& v, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_matrix_market_vector: cannot open " + path);
  std::fprintf(f, "%%%%MatrixMarket matrix array real general\n");
  std::fprintf(f, "%d 1\n", static_cast<int>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) std::fprintf(f, "%.17g\n", v[i]);
  std::fclose(f);
}

}  // namespace hpdg
