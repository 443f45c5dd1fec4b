#include "agentarch/value.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "agentarch/errors.hpp"

namespace agentarch {

Tensor Tensor::zeros(std::vector<int> shape) {
  Tensor t;
  int n = 1;
  for (int d : shape) {
    if (d < 1) throw shape_mismatch("tensor dimensions must be >= 1");
    n *= d;
  }
  t.shape = std::move(shape);
  t.data.assign(static_cast<size_t>(n), 0.0);
  return t;
}

int Tensor::size() const {
  int n = 1;
  for (int d : shape) n *= d;
  return n;
}

namespace {

int flat_index(const std::vector<int>& shape, const std::vector<int>& idx) {
  if (idx.size() != shape.size()) throw shape_mismatch("tensor index rank mismatch");
  int flat = 0;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= shape[i]) throw shape_mismatch("tensor index out of range");
    flat = flat * shape[i] + idx[i];
  }
  return flat;
}

}  // namespace

double& Tensor::at(const std::vector<int>& idx) {
  return data[static_cast<size_t>(flat_index(shape, idx))];
}

double Tensor::at(const std::vector<int>& idx) const {
  return data[static_cast<size_t>(flat_index(shape, idx))];
}

double value_distance(const Value& a, const Value& b) {
  constexpr double kFar = std::numeric_limits<double>::infinity();
  if (a.v.index() != b.v.index()) return kFar;
  if (a.is_index()) return a.index() == b.index() ? 0.0 : 1.0;
  if (a.is_real()) return std::abs(a.real() - b.real());
  if (a.is_tensor()) {
    const Tensor& x = a.tensor();
    const Tensor& y = b.tensor();
    if (x.shape != y.shape) return kFar;
    double m = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) m = std::max(m, std::abs(x.data[i] - y.data[i]));
    return m;
  }
  const Tuple& x = a.tuple();
  const Tuple& y = b.tuple();
  if (x.size() != y.size()) return kFar;
  double m = 0.0;
  for (size_t i = 0; i < x.size(); ++i) m = std::max(m, value_distance(x[i], y[i]));
  return m;
}

std::string value_to_string(const Value& v) {
  std::ostringstream os;
  if (v.is_index()) {
    os << "#" << v.index();
  } else if (v.is_real()) {
    os << v.real();
  } else if (v.is_tensor()) {
    const Tensor& t = v.tensor();
    os << "tensor[";
    for (size_t i = 0; i < t.shape.size(); ++i) os << (i ? "x" : "") << t.shape[i];
    os << "](";
    for (size_t i = 0; i < t.data.size() && i < 8; ++i) os << (i ? "," : "") << t.data[i];
    if (t.data.size() > 8) os << ",...";
    os << ")";
  } else {
    os << "(";
    const Tuple& t = v.tuple();
    for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << value_to_string(t[i]);
    os << ")";
  }
  return os.str();
}

}  // namespace agentarch
