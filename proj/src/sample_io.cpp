#include "spa/sample_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace spa {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Sample parse_sample_csv(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<double> values;
    std::size_t pos = 0;
    int line_no = 0;
    bool first_content = true;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.find(',') != std::string_view::npos) {
            throw InputError("line " + std::to_string(line_no) + ": expected a single column, found a comma");
        }
        if (first_content && line == "x") {
            first_content = false;
            continue;
        }
        first_content = false;
        double v = 0.0;
        const char* begin = line.data();
        if (*begin == '+') ++begin;
        const auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw InputError("line " + std::to_string(line_no) + ": not a number: '" + std::string(line) + "'");
        }
        if (!std::isfinite(v)) throw InputError("line " + std::to_string(line_no) + ": non-finite value");
        values.push_back(v);
    }
    if (values.empty()) throw InputError("no observations in input");
    return Sample(std::move(values));
}

Sample load_sample_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InputError("read error on '" + path + "'");
    return parse_sample_csv(ss.str());
}

}  // namespace spa
