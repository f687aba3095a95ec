#pragma once

#include <string>

namespace latentscope {

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);

/// Fixed 17-significant-digit form; also round-trips exactly, stable layout
/// for model files.
std::string format_double17(double v);

/// Strict full-string parse; throws InputError naming `what` otherwise.
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
unsigned long long parse_uint(const std::string& text, const std::string& what);

}  // namespace latentscope
