#include "classifiers_impl.hpp"

namespace bball::detail {

KnnModel fit_knn(const TrainInput& in) {
  KnnModel m;
  m.k = in.iparam("k");
  if (m.k < 1) throw Error("kNN needs k >= 1");
  if (static_cast<size_t>(m.k) > in.data.n_rows)
    throw Error("kNN k=" + std::to_string(m.k) + " exceeds the " +
                std::to_string(in.data.n_rows) + " training rows");
  m.n = in.data.n_rows;
  m.d = in.data.n_cols;
  m.rows = in.data.values;
  m.y1 = in.y1;
  return m;
}

}  // namespace bball::detail
