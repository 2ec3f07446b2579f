#ifndef ZLAB_TEXT_HPP
#define ZLAB_TEXT_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zlab {

// Shortest round-trip decimal form; "inf" for +infinity.
std::string format_double(double x);
// Accepts "inf" and "+inf"; rejects trailing garbage.
double parse_double(std::string_view s);
// "k1=v1|k2=v2" into ordered pairs.
std::vector<std::pair<std::string, std::string>> split_fields(const std::string& text);

}  // namespace zlab

#endif
