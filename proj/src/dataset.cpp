#include "dasp/dataset.hpp"

#include "dasp/error.hpp"

namespace dasp {

RegressionDataset subset_rows(const RegressionDataset& data, const std::vector<Eigen::Index>& rows) {
  RegressionDataset out;
  out.x.resize(Eigen::Index(rows.size()), data.p());
  out.y.resize(Eigen::Index(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Eigen::Index r = rows[k];
    if (r < 0 || r >= data.n()) throw Error(ErrorKind::InvalidParameter, "row index out of range");
    out.x.row(Eigen::Index(k)) = data.x.row(r);
    out.y(Eigen::Index(k)) = data.y(r);
  }
  out.b_true = data.b_true;
  out.intercept_true = data.intercept_true;
  out.sigma_true = data.sigma_true;
  out.sigma_x_true = data.sigma_x_true;
  return out;
}

}  // namespace dasp
