#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace agentarch {

// Dense real tensor. Scalars are shape {1}; a Q-table over 4 states and 2
// actions is shape {4, 2} with row-major data.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  static Tensor zeros(std::vector<int> shape);
  int size() const;
  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;

  bool operator==(const Tensor&) const = default;
};

struct Value;
using Tuple = std::vector<Value>;

// A runtime value on a wire: an element of a finite set (stored as its label
// index), a real scalar, a tensor, or a tuple of values.
struct Value {
  std::variant<std::int64_t, double, Tensor, Tuple> v;

  Value() : v(std::int64_t{0}) {}
  Value(std::int64_t i) : v(i) {}
  Value(int i) : v(std::int64_t{i}) {}
  Value(double d) : v(d) {}
  Value(Tensor t) : v(std::move(t)) {}
  Value(Tuple t) : v(std::move(t)) {}

  bool is_index() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_real() const { return std::holds_alternative<double>(v); }
  bool is_tensor() const { return std::holds_alternative<Tensor>(v); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(v); }

  std::int64_t index() const { return std::get<std::int64_t>(v); }
  double real() const { return std::get<double>(v); }
  const Tensor& tensor() const { return std::get<Tensor>(v); }
  Tensor& tensor() { return std::get<Tensor>(v); }
  const Tuple& tuple() const { return std::get<Tuple>(v); }
  Tuple& tuple() { return std::get<Tuple>(v); }

  bool operator==(const Value&) const = default;
};

// Sup-norm style distance: indices compare 0/1, reals and tensors by absolute
// difference, tuples componentwise max. Structurally different values are
// infinitely far apart.
double value_distance(const Value& a, const Value& b);

std::string value_to_string(const Value& v);

}  // namespace agentarch
