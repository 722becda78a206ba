#include "rmat/richardson.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "rmat/errors.hpp"

namespace rmat {

namespace {

TensorOp extrapolate(std::vector<TensorOp> column, double ratio) {
  // column[k] = f(base / ratio^k); Neville-style tableau.
  for (std::size_t level = 1; level < column.size(); ++level) {
    const double t = std::pow(ratio, static_cast<double>(level));
    for (std::size_t k = 0; k + level < column.size(); ++k) {
      TensorOp next = scale(column[k + 1], t);
      next -= column[k];
      next *= 1.0 / (t - 1.0);
      column[k] = std::move(next);
    }
  }
  return column.front();
}

std::vector<TensorOp> evaluate_ladder(const std::function<TensorOp(double)>& f, double base,
                                      const RichardsonLadder& ladder) {
  std::vector<TensorOp> values;
  for (int k = 0; k <= ladder.order; ++k) {
    values.push_back(f(base / std::pow(ladder.ratio, k)));
  }
  return values;
}

double tableau_ratio(const RichardsonLadder& ladder) {
  return ladder.even ? ladder.ratio * ladder.ratio : ladder.ratio;
}

}  // namespace

TensorOp richardson_limit(const std::function<TensorOp(double)>& f,
                          const RichardsonLadder& ladder) {
  if (ladder.order < 0 || !(ladder.ratio > 1.0) || !(ladder.base > 0.0)) {
    throw ConfigError("invalid Richardson ladder");
  }
  return extrapolate(evaluate_ladder(f, ladder.base, ladder), tableau_ratio(ladder));
}

RichardsonEstimate richardson_checked(const std::function<TensorOp(double)>& f,
                                      const RichardsonLadder& ladder) {
  if (ladder.order < 0 || !(ladder.ratio > 1.0) || !(ladder.base > 0.0)) {
    throw ConfigError("invalid Richardson ladder");
  }
  // The two ladders share all but one point.
  std::vector<TensorOp> values = evaluate_ladder(f, ladder.base, ladder);
  values.push_back(f(ladder.base / std::pow(ladder.ratio, ladder.order + 1)));
  std::vector<TensorOp> coarse(values.begin(), values.end() - 1);
  std::vector<TensorOp> fine(values.begin() + 1, values.end());
  RichardsonEstimate est;
  TensorOp coarse_value = extrapolate(std::move(coarse), tableau_ratio(ladder));
  est.value = extrapolate(std::move(fine), tableau_ratio(ladder));
  est.ladder_gap = max_abs_diff(coarse_value, est.value);
  if (!(est.ladder_gap <= ladder.agreement)) {
    std::ostringstream os;
    os << "Richardson extrapolation did not settle: successive ladders differ by "
       << est.ladder_gap << " (limit " << ladder.agreement << ")";
    throw NumericalError(os.str());
  }
  return est;
}

TensorOp central_derivative(const std::function<TensorOp(cplx)>& f, cplx x, double step) {
  TensorOp out = f(x + 3.0 * step);
  out.add_scaled(-9.0, f(x + 2.0 * step));
  out.add_scaled(45.0, f(x + step));
  out.add_scaled(-45.0, f(x - step));
  out.add_scaled(9.0, f(x - 2.0 * step));
  out.add_scaled(-1.0, f(x - 3.0 * step));
  out *= 1.0 / (60.0 * step);
  return out;
}

}  // namespace rmat
