#include "latentscope/text_format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "latentscope/errors.hpp"

namespace latentscope {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string format_double17(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw InputError(what + ": '" + text + "' is not a number");
  return v;
}

long long parse_int(const std::string& text, const std::string& what) {
  long long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw InputError(what + ": '" + text + "' is not an integer");
  return v;
}

unsigned long long parse_uint(const std::string& text, const std::string& what) {
  unsigned long long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw InputError(what + ": '" + text + "' is not a non-negative integer");
  return v;
}

}  // namespace latentscope
