#include "qwh_cli/angles.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qwh/numerics.hpp"

namespace qwh::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view text, const char* what) {
  throw std::invalid_argument("bad angle '" + std::string(text) + "': " + what);
}

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) bad(whole, "not a number");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

double parse_angle(std::string_view text) {
  const auto whole = text;
  text = trim(text);
  if (text.empty()) bad(whole, "empty");
  double sign = 1.0;
  if (text.front() == '-' || text.front() == '+') {
    if (text.front() == '-') sign = -1.0;
    text.remove_prefix(1);
  }

  double denominator = 1.0;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    denominator = parse_number(trim(text.substr(slash + 1)), whole);
    if (denominator == 0.0) bad(whole, "zero denominator");
    text = trim(text.substr(0, slash));
  }

  double value = 0.0;
  if (const auto p = text.find("pi"); p != std::string_view::npos) {
    if (p + 2 != text.size()) bad(whole, "trailing characters after pi");
    auto coeff = trim(text.substr(0, p));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    value = (coeff.empty() ? 1.0 : parse_number(coeff, whole)) * pi;
  } else {
    if (text.empty()) bad(whole, "missing value");
    value = parse_number(text, whole);
  }
  return sign * value / denominator;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  for (const auto item : split(text, ',')) {
    if (item.find(':') == std::string_view::npos) {
      out.push_back(parse_angle(item));
      continue;
    }
    const auto parts = split(item, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be start:step:stop, got '" + std::string(item) + "'");
    const double lo = parse_angle(parts[0]), step = parse_angle(parts[1]), hi = parse_angle(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("empty or reversed range '" + std::string(item) + "'");
    const double count = std::round((hi - lo) / step);
    if (std::abs(lo + count * step - hi) > 1e-9 * std::max(1.0, std::abs(hi)))
      throw std::invalid_argument("range step does not divide '" + std::string(item) + "'");
    const auto intervals = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i <= intervals; ++i) out.push_back(i == intervals ? hi : lo + double(i) * step);
  }
  return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  auto to_count = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
      throw std::invalid_argument("bad count '" + std::string(s) + "'");
    return v;
  };
  std::vector<std::size_t> out;
  for (const auto item : split(text, ',')) {
    if (item.find(':') == std::string_view::npos) {
      out.push_back(to_count(item));
      continue;
    }
    const auto parts = split(item, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be start:step:stop, got '" + std::string(item) + "'");
    const auto lo = to_count(parts[0]), step = to_count(parts[1]), hi = to_count(parts[2]);
    if (step == 0 || hi < lo) throw std::invalid_argument("empty or reversed range '" + std::string(item) + "'");
    for (auto v = lo; v <= hi; v += step) out.push_back(v);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t intervals) {
  std::vector<double> out(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    out[i] = i == intervals ? hi : lo + (hi - lo) * double(i) / double(intervals);
  return out;
}

}  // namespace qwh::cli
