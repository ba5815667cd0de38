#include "foldylax/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace foldylax::json_out {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;  // no negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

void escape(std::ostringstream& out, const std::string& s) {
  out << '"';
  for (const char ch : s) {
    switch (ch) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      case '\r': out << "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out << buf;
        } else {
          out << ch;
        }
    }
  }
  out << '"';
}

bool is_scalar_array(const Array& a) {
  for (const auto& v : a) {
    if (std::holds_alternative<Object>(v.data)) return false;
    if (const auto* inner = std::get_if<Array>(&v.data)) {
      for (const auto& w : *inner) {
        if (std::holds_alternative<Array>(w.data) || std::holds_alternative<Object>(w.data)) return false;
      }
    }
  }
  return true;
}

void write(std::ostringstream& out, const Value& v, int indent, int depth, bool compact) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  if (std::holds_alternative<std::nullptr_t>(v.data)) {
    out << "null";
  } else if (const auto* b = std::get_if<bool>(&v.data)) {
    out << (*b ? "true" : "false");
  } else if (const auto* i = std::get_if<std::int64_t>(&v.data)) {
    out << *i;
  } else if (const auto* d = std::get_if<double>(&v.data)) {
    out << format_double(*d);
  } else if (const auto* s = std::get_if<std::string>(&v.data)) {
    escape(out, *s);
  } else if (const auto* a = std::get_if<Array>(&v.data)) {
    if (a->empty()) {
      out << "[]";
      return;
    }
    // Short numeric vectors and matrices stay on one line.
    const bool inline_array = compact || is_scalar_array(*a);
    out << '[';
    for (std::size_t k = 0; k < a->size(); ++k) {
      if (k) out << (inline_array ? ", " : ",");
      if (!inline_array) out << '\n' << pad;
      write(out, (*a)[k], indent, depth + 1, inline_array);
    }
    if (!inline_array) out << '\n' << close_pad;
    out << ']';
  } else if (const auto* o = std::get_if<Object>(&v.data)) {
    if (o->empty()) {
      out << "{}";
      return;
    }
    out << '{';
    for (std::size_t k = 0; k < o->size(); ++k) {
      if (k) out << ',';
      out << '\n' << pad;
      escape(out, (*o)[k].first);
      out << ": ";
      write(out, (*o)[k].second, indent, depth + 1, false);
    }
    out << '\n' << close_pad << '}';
  }
}

}  // namespace

std::string dump(const Value& v, int indent) {
  std::ostringstream out;
  write(out, v, indent, 0, false);
  out << '\n';
  return out.str();
}

Value vec(const Vec3& v) { return Array{v.x(), v.y(), v.z()}; }

Value cvec(const CVec3& v) {
  Array a;
  for (int i = 0; i < 3; ++i) a.push_back(Array{v(i).real(), v(i).imag()});
  return a;
}

Value mat(const Mat3& m) {
  Array rows;
  for (int r = 0; r < 3; ++r) rows.push_back(Array{m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

}  // namespace foldylax::json_out
