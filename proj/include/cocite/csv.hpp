#pragma once

#include <charconv>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cocite {

// Minimal delimiter-separated reader for the flat-file formats used
// throughout: no quoting, one record per line, '#' lines are comments.
class DsvReader {
public:
    struct Options {
        char delimiter = 0;       // 0 = auto-detect from the first data line
        bool skip_header = false; // drop the first non-comment line
    };

    DsvReader(std::istream& in, Options opts);

    // Next record split into fields, or nullopt at end of input.
    std::optional<std::vector<std::string>> next();

    long line_number() const { return line_; }
    char delimiter() const { return delim_; }

private:
    std::istream& in_;
    Options opts_;
    char delim_ = 0;
    long line_ = 0;
    bool header_pending_;
};

// Deterministic numeric formatting (shortest round-trip representation).
std::string format_double(double v);

long long parse_int(std::string_view field, long line);

}  // namespace cocite
