#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace citefit::util {

// Shortest decimal representation that round-trips visually (%.12g),
// with "-0" normalized to "0". Used for all tabular output so that
// identical runs produce byte-identical artifacts.
std::string format_double(double x);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string to_lower(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Number of worker threads: CITEFIT_THREADS if set and >= 1, else 1.
unsigned thread_count();

// Runs fn(i) for i in [0, n). Splits the range over thread_count()
// threads when that is > 1; iterations must be independent. Results are
// deterministic either way since each index owns its output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace citefit::util
