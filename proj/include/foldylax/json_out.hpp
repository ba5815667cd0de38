#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "foldylax/types.hpp"

// Minimal JSON value tree for deterministic output. Floating-point numbers
// are always written as %.16e (17 significant digits); non-finite values
// are written as null.
namespace foldylax::json_out {

struct Value;
using Array = std::vector<Value>;
using Object = std::vector<std::pair<std::string, Value>>;

struct Value {
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> data;

  Value() : data(nullptr) {}
  Value(std::nullptr_t) : data(nullptr) {}
  Value(bool b) : data(b) {}
  Value(int i) : data(static_cast<std::int64_t>(i)) {}
  Value(long i) : data(static_cast<std::int64_t>(i)) {}
  Value(long long i) : data(static_cast<std::int64_t>(i)) {}
  Value(unsigned long i) : data(static_cast<std::int64_t>(i)) {}
  Value(unsigned long long i) : data(static_cast<std::int64_t>(i)) {}
  Value(double d) : data(d) {}
  Value(const char* s) : data(std::string(s)) {}
  Value(std::string s) : data(std::move(s)) {}
  Value(Array a) : data(std::move(a)) {}
  Value(Object o) : data(std::move(o)) {}
};

std::string format_double(double v);
std::string dump(const Value& v, int indent = 2);

Value vec(const Vec3& v);
Value cvec(const CVec3& v);  // [[re, im], [re, im], [re, im]]
Value mat(const Mat3& m);    // row-major nested arrays

}  // namespace foldylax::json_out
