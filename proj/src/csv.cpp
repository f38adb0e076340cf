#include "cocite/csv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "cocite/errors.hpp"

namespace cocite {

DsvReader::DsvReader(std::istream& in, Options opts)
    : in_(in), opts_(opts), delim_(opts.delimiter), header_pending_(opts.skip_header) {}

std::optional<std::vector<std::string>> DsvReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (delim_ == 0) {
            // Auto-detect: prefer tab if present, else comma.
            delim_ = line.find('\t') != std::string::npos ? '\t' : ',';
        }
        if (header_pending_) {
            header_pending_ = false;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(delim_, start);
            if (pos == std::string::npos) {
                fields.emplace_back(line.substr(start));
                break;
            }
            fields.emplace_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        for (auto& f : fields) {
            while (!f.empty() && (f.front() == ' ')) f.erase(f.begin());
            while (!f.empty() && (f.back() == ' ')) f.pop_back();
        }
        return fields;
    }
    return std::nullopt;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

long long parse_int(std::string_view field, long line) {
    long long value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw IngestError("expected integer, got '" + std::string(field) + "'", line);
    return value;
}

}  // namespace cocite
