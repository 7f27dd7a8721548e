#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subrk::cli {

// Runs one command line and returns the process exit code: 0 success,
// 1 usage, 2 domain, 3 numerical failure, 4 suite failure.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "0.5", "-2i", "0.5+0.25i", "1e-3-4i".
std::complex<double> parse_complex(std::string_view s);
std::vector<std::complex<double>> parse_point(std::string_view s);
std::vector<double> parse_grid(std::string_view s);

// key=value lines; '#' starts a comment, blank lines are skipped.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

}  // namespace subrk::cli
