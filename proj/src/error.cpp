#include "causalkg/error.hpp"

#include <sstream>

namespace causalkg {

std::string SyntaxError::format_message(
    std::size_t line, std::size_t column, const std::string& found,
    const std::vector<std::string>& expected) {
  std::ostringstream out;
  out << "syntax error at line " << line << ", column " << column
      << ": found " << found;
  if (!expected.empty()) {
    out << "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
  }
  return out.str();
}

}  // namespace causalkg
